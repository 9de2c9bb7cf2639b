"""Logic tier: pipeline orchestration service and its HTTP API."""

from .api import create_app
from .auth import TokenBroker, credential_entry, load_credentials
from .leases import LeaseTable
from .service import AppService
from .statemachine import STAGES, STATES, TRANSITIONS, check_stage, legal_stages

__all__ = [
    "AppService",
    "LeaseTable",
    "STAGES",
    "STATES",
    "TRANSITIONS",
    "TokenBroker",
    "check_stage",
    "create_app",
    "credential_entry",
    "legal_stages",
    "load_credentials",
]
