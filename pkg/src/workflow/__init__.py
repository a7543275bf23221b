# Run orchestration for simulations and controller checks

from src.workflow.orchestrator import (
    CheckThresholds,
    ControllerCheck,
    ControllerCheckResult,
    SimulationOrchestrator,
)

__all__ = ["CheckThresholds", "ControllerCheck", "ControllerCheckResult", "SimulationOrchestrator"]
