"""Deterministic tabletop human-robot collaboration simulator.

A fixed-tick engine pairs a scripted (or live, over WebSocket) human with
a robot arm on a shared table. Who handles which block is decided by one
of eight pluggable allocation techniques, four explicit (voice label,
press-hold menu, subtle push gesture, fixed territories) and four
implicit (proactive, distance, gaze, proximity score fields). Trials are
seeded and replay bit-exactly from their JSON-lines logs; the metrics
module turns logs into team-fluency reports and the harness sweeps the
technique x task x placement grid.
"""
from .config import DEFAULT_MOTION, DEFAULT_POLICY, DEFAULT_SIM, \
    MotionModel, PolicyParams, SimParams
from .engine import Engine, ReplayError, replay, replay_with_field, run_trial
from .events import ENGINE_VERSION, ActionRecord, EventLog, MalformedLogError
from .geometry import Position, RegionGrid
from .harness import ExperimentPlan, check_trends, load_plan, run_batch
from .humans import GazeMode, HumanModel, ModelKind
from .metrics import FluencyReport, TimeSegments, TrialResult, \
    export_results, fluency_report, segment_timeline, trial_result
from .policies import AllocationEvent, MenuChoice, Policy, Technique, \
    make_policy
from .scorefield import ScoreField, classify_gaze, classify_proximity
from .workspace import Actor, Assignment, Block, BlockState, Color, \
    GoalStructure, Placement, ScenarioError, TaskConfig, TaskType, \
    WorldState, generate_scenario, placement_legal, task_complete

__version__ = ENGINE_VERSION

__all__ = [
    "ENGINE_VERSION", "__version__",
    "SimParams", "MotionModel", "PolicyParams",
    "DEFAULT_SIM", "DEFAULT_MOTION", "DEFAULT_POLICY",
    "Position", "RegionGrid",
    "Color", "Actor", "Assignment", "BlockState", "TaskType", "Placement",
    "Block", "GoalStructure", "TaskConfig", "WorldState", "ScenarioError",
    "generate_scenario", "placement_legal", "task_complete",
    "ScoreField", "classify_gaze", "classify_proximity",
    "Technique", "Policy", "MenuChoice", "AllocationEvent", "make_policy",
    "HumanModel", "ModelKind", "GazeMode",
    "ActionRecord", "EventLog", "MalformedLogError",
    "Engine", "run_trial", "replay", "replay_with_field", "ReplayError",
    "TimeSegments", "FluencyReport", "TrialResult", "segment_timeline",
    "fluency_report", "trial_result", "export_results",
    "ExperimentPlan", "load_plan", "run_batch", "check_trends",
]
