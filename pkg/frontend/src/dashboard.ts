/**
 * Project dashboard: which actions a project admits right now. The single
 * source of truth is the `legal_stages` list served with the progress
 * snapshot; the dashboard never second-guesses the server's state machine.
 */

import type { Progress } from "./api.js";

export const PIPELINE_STAGES = [
  "corpus",
  "index",
  "analyze",
  "build",
  "submit_verification",
] as const;

export type StageName = (typeof PIPELINE_STAGES)[number];

const STAGE_LABELS: Record<StageName, string> = {
  corpus: "Сформировать корпус",
  index: "Построить индекс",
  analyze: "Лингвистический анализ",
  build: "Собрать онтологию",
  submit_verification: "На верификацию",
};

export interface DashboardAction {
  id: string;
  label: string;
  kind: "stage" | "verdict";
  enabled: boolean;
}

/**
 * The full action inventory for a progress snapshot. Stage buttons are
 * enabled exactly when the server lists the stage as legal; the verdict
 * buttons exactly when the project sits in verification.
 */
export function dashboardActions(progress: Progress): DashboardAction[] {
  const legal = new Set(progress.legal_stages);
  const actions: DashboardAction[] = PIPELINE_STAGES.map((stage) => ({
    id: stage,
    label: STAGE_LABELS[stage],
    kind: "stage" as const,
    enabled: legal.has(stage),
  }));
  const verifying = progress.state === "UNDER_VERIFICATION";
  actions.push(
    { id: "approve", label: "Утвердить", kind: "verdict", enabled: verifying },
    { id: "reject", label: "Отклонить", kind: "verdict", enabled: verifying },
  );
  return actions;
}

export function counterSummary(progress: Progress): string {
  const parts = Object.entries(progress.counters)
    .filter(([, value]) => value > 0)
    .map(([name, value]) => `${name} ${value}`);
  return parts.length > 0 ? parts.join(" · ") : "пока пусто";
}

/** Render the action row; disabled buttons stay visible but inert. */
export function renderDashboard(
  container: HTMLElement,
  progress: Progress,
  onAction: (action: DashboardAction) => void,
): void {
  container.replaceChildren();

  const state = document.createElement("div");
  state.className = "dashboard-state";
  state.textContent = `${progress.name} — ${progress.state}`;
  container.appendChild(state);

  const counters = document.createElement("div");
  counters.className = "dashboard-counters";
  counters.textContent = counterSummary(progress);
  container.appendChild(counters);

  const row = document.createElement("div");
  row.className = "dashboard-actions";
  for (const action of dashboardActions(progress)) {
    const button = document.createElement("button");
    button.textContent = action.label;
    button.disabled = !action.enabled;
    button.dataset.action = action.id;
    button.className = action.kind === "verdict" ? "verdict-button" : "stage-button";
    button.addEventListener("click", () => onAction(action));
    row.appendChild(button);
  }
  container.appendChild(row);
}
