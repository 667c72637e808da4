"""Experiment configuration, orchestration, export and the command-line entry point."""
from .config import ExperimentConfig, load_config
from .experiments import ExperimentResult, TaskResult, run_experiment, run_ova, run_ovo, run_single
from .export import export_results

__all__ = ["ExperimentConfig", "ExperimentResult", "TaskResult", "export_results", "load_config",
           "run_experiment", "run_ova", "run_ovo", "run_single"]
