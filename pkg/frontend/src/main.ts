/**
 * Application shell: login, project list, and the project workspace with
 * the stage dashboard and the ontology editor. Everything the page does
 * goes through the HTTP API; there is no local persistence beyond the
 * in-memory editing model.
 */

import { ApiError, WorkbenchClient } from "./api.js";
import type { Progress } from "./api.js";
import { renderDashboard } from "./dashboard.js";
import type { DashboardAction } from "./dashboard.js";
import { GraphModel, offendingEdges } from "./model.js";
import type { EdgeType, NodeKind } from "./model.js";
import { GraphView } from "./graphview.js";

const SERVER = new URLSearchParams(location.search).get("server") ?? "http://127.0.0.1:7700";

const client = new WorkbenchClient(SERVER);
let currentProject: string | null = null;
let model: GraphModel | null = null;
let view: GraphView | null = null;
let watching: AbortController | null = null;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) node.setAttribute(name, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function flash(message: string, isError = false): void {
  const bar = document.getElementById("flash")!;
  bar.textContent = message;
  bar.className = isError ? "flash error" : "flash";
}

async function guarded<T>(work: () => Promise<T>): Promise<T | undefined> {
  try {
    return await work();
  } catch (exc) {
    if (exc instanceof ApiError) {
      flash(`${exc.code}: ${exc.message}`, true);
      return undefined;
    }
    flash(String(exc), true);
    return undefined;
  }
}

// ------------------------------------------------------------------- login

function renderLogin(): void {
  const panel = document.getElementById("login")!;
  panel.replaceChildren();
  const user = el("input", { placeholder: "пользователь", value: "admin" });
  const password = el("input", { placeholder: "пароль", type: "password" });
  const button = el("button", {}, "Войти");
  button.addEventListener("click", async () => {
    const session = await guarded(() => client.login(user.value, password.value));
    if (session) {
      flash(`вы вошли как ${session.user}`);
      panel.replaceChildren(el("span", {}, session.user));
      await refreshProjects();
    }
  });
  panel.append(user, password, button);
}

// ---------------------------------------------------------------- projects

async function refreshProjects(): Promise<void> {
  const projects = await guarded(() => client.listProjects());
  if (!projects) return;
  const list = document.getElementById("projects")!;
  list.replaceChildren();
  for (const project of projects) {
    const row = el("li", {}, `${project.name} (${project.state})`);
    row.addEventListener("click", () => openProject(project.id));
    list.appendChild(row);
  }
  const nameInput = el("input", { placeholder: "имя нового проекта" });
  const createButton = el("button", {}, "Создать проект");
  createButton.addEventListener("click", async () => {
    const created = await guarded(() => client.createProject(nameInput.value));
    if (created) {
      flash(`создан проект ${created.id}`);
      await refreshProjects();
    }
  });
  const creator = el("li", { class: "creator" });
  creator.append(nameInput, createButton);
  list.appendChild(creator);
}

// --------------------------------------------------------------- workspace

async function openProject(projectId: string): Promise<void> {
  currentProject = projectId;
  watching?.abort();
  const progress = await guarded(() => client.getProgress(projectId));
  if (!progress) return;
  paintDashboard(progress);
  await loadOntology();
  watchEvents(projectId);
}

function paintDashboard(progress: Progress): void {
  const host = document.getElementById("dashboard")!;
  renderDashboard(host, progress, (action) => void runAction(action));
}

async function runAction(action: DashboardAction): Promise<void> {
  if (!currentProject) return;
  const projectId = currentProject;
  let progress: Progress | undefined;
  if (action.kind === "stage") {
    progress = await guarded(() => client.runStage(projectId, action.id));
  } else {
    progress = await guarded(async () => {
      try {
        return await client.verify(projectId, action.id as "approve" | "reject");
      } catch (exc) {
        if (exc instanceof ApiError && exc.code === "VERIFICATION_BLOCKED" && model && view) {
          view.setHighlights(offendingEdges(model, exc.findings.map((f) => ({
            kind: f.kind as "ISA_CYCLE",
            refs: f.refs,
            detail: f.detail,
          }))));
        }
        throw exc;
      }
    });
  }
  if (progress) {
    flash(`${action.label}: ${progress.state}`);
    paintDashboard(progress);
    await loadOntology();
  }
}

async function loadOntology(): Promise<void> {
  if (!currentProject) return;
  const projectId = currentProject;
  const svg = document.getElementById("graph") as unknown as SVGSVGElement;
  try {
    const { doc } = await client.getOntology(projectId);
    model = GraphModel.fromDocument(doc);
  } catch (exc) {
    if (exc instanceof ApiError && (exc.status === 404 || exc.code === "NOT_FOUND")) {
      model = null;
      svg.replaceChildren();
      renderEditorControls();
      return;
    }
    throw exc;
  }
  view = new GraphView(svg, { onSelect: renderEditorControls });
  view.render(model);
  renderEditorControls();
}

function renderEditorControls(): void {
  const host = document.getElementById("editor")!;
  host.replaceChildren();
  if (!model) {
    host.appendChild(el("p", {}, "У проекта ещё нет черновой онтологии."));
    return;
  }
  const graph = model;

  const nodeId = el("input", { placeholder: "идентификатор понятия" });
  const nodeKind = el("select");
  nodeKind.append(el("option", { value: "object" }, "объект"), el("option", { value: "process" }, "процесс"));
  const addNode = el("button", {}, "Добавить понятие");
  addNode.addEventListener("click", () => {
    try {
      graph.addNode({
        id: nodeId.value,
        label: nodeId.value,
        synonyms: [nodeId.value],
        kind: nodeKind.value as NodeKind,
      });
      view?.render(graph);
      flash(`добавлено понятие ${nodeId.value}`);
    } catch (exc) {
      flash(String(exc), true);
    }
  });

  const source = el("input", { placeholder: "источник" });
  const target = el("input", { placeholder: "приёмник" });
  const rtype = el("select");
  for (const value of ["is_a", "part_of", "associated_with", "synonym_of"]) {
    rtype.append(el("option", { value }, value));
  }
  if (view?.selected) source.value = view.selected;
  const addEdge = el("button", {}, "Добавить отношение");
  addEdge.addEventListener("click", () => {
    try {
      graph.addEdge({
        source: source.value,
        target: target.value,
        rtype: rtype.value as EdgeType,
        confidence: 0.5,
        evidence: [],
      });
      view?.render(graph);
      flash(`добавлено отношение ${source.value} -> ${target.value}`);
    } catch (exc) {
      flash(String(exc), true);
    }
  });

  const check = el("button", {}, "Проверить согласованность");
  check.addEventListener("click", () => {
    const findings = graph.check();
    view?.setHighlights(offendingEdges(graph, findings));
    flash(findings.length === 0 ? "противоречий нет" : `найдено противоречий: ${findings.length}`, findings.length > 0);
  });

  const save = el("button", {}, graph.dirty ? "Сохранить изменения" : "Сохранить");
  save.addEventListener("click", async () => {
    if (!currentProject) return;
    const projectId = currentProject;
    const saved = await guarded(async () =>
      client.putOntology(projectId, await graph.toDocument(), "draft", graph.loadedDigest),
    );
    if (saved) {
      graph.markSaved(saved.digest);
      flash(`сохранено, дайджест ${saved.digest.slice(0, 12)}…`);
      renderEditorControls();
    }
  });

  const remove = el("button", {}, "Удалить выбранное понятие");
  remove.addEventListener("click", () => {
    if (!view?.selected) {
      flash("сначала выберите понятие", true);
      return;
    }
    graph.removeNode(view.selected);
    view.select(null);
    view.render(graph);
  });

  const nodeRow = el("div", { class: "control-row" });
  nodeRow.append(nodeId, nodeKind, addNode, remove);
  const edgeRow = el("div", { class: "control-row" });
  edgeRow.append(source, target, rtype, addEdge);
  const actionRow = el("div", { class: "control-row" });
  actionRow.append(check, save);
  if (graph.dirty) {
    actionRow.appendChild(el("span", { class: "dirty" }, `несохранённых правок: ${graph.dirtyEntries.length}`));
  }
  host.append(nodeRow, edgeRow, actionRow);
}

function watchEvents(projectId: string): void {
  watching = new AbortController();
  const signal = watching.signal;
  void (async () => {
    try {
      for await (const entry of client.followEvents(projectId, signal)) {
        if (signal.aborted || currentProject !== projectId) return;
        if (entry.event === "stage_completed" || entry.event === "verification") {
          const progress = await client.getProgress(projectId);
          paintDashboard(progress);
        }
      }
    } catch {
      // stream closed; the next openProject restarts it
    }
  })();
}

// ------------------------------------------------------------------- start

export function start(): void {
  renderLogin();
  void refreshProjects();
}

if (typeof document !== "undefined" && document.getElementById("projects")) {
  start();
}
