"""glitchsim: simulator and search library for multi-voltage-fault
injection against a TrustZone-M-style protected target.

Layers, bottom up:

- :mod:`glitchsim.timing` — tick arithmetic, fault windows, splitting.
- :mod:`glitchsim.chain` — the chained fault-unit glitcher model.
- :mod:`glitchsim.dut` — instruction stream, security state, fault response.
- :mod:`glitchsim.scenarios` — firmware scenarios, success functions, outcomes.
- :mod:`glitchsim.calibration` — fitted noise-model presets.
- :mod:`glitchsim.search` — sweep / translate / fuzzyfy / integrate / evaluate.
- :mod:`glitchsim.campaign` — end-to-end experiments and persistence.
- :mod:`glitchsim.cli` — the ``glitchsim`` command.
"""

from .calibration import (deterministic_model, dup_register_model, shift_model,
                          tzm_model)
from .chain import ChainConfig, merge_windows, set_enabled, simulate_chain
from .dut import (BodModel, Effect, FaultResponseModel, Instruction,
                  RawTrialResult, SecurityState, apply_random_delays,
                  execute_trial)
from .errors import (BadChainLength, ConfigError, EmptyChain, EmptySplit,
                     GlitchSimError, IncompleteSweep, NoIntegratedSuccess,
                     NotFound, OverlapError, TransferInvalid)
from .campaign import (CampaignConfig, SearchConfig, load_config, nominal_combo,
                       run_attack_flow, run_bod_eval, run_comparison,
                       run_countermeasure_eval, run_exhaustive, run_sweep_only,
                       run_wide_vs_narrow)
from .scenarios import (Outcome, ScenarioSpec, Target, builtin_scenarios,
                        classify, load_scenario, save_scenario)
from .search import (AbsoluteParamSet, FuzzyInterval, RankedCombo, SearchSpace,
                     SimContext, accumulate_relative, evaluate_repeatability,
                     exhaustive_search, fuzzyfy, integrate, run_chain_trial,
                     run_trials, sweep, transfer_parameters,
                     translate_to_relative)
from .seeding import mix64
from .timing import ClockDomains, FaultSpec, Frame, split_fault, ticks_from_ns

__version__ = "1.0.0"

__all__ = [
    "AbsoluteParamSet", "BadChainLength", "BodModel", "CampaignConfig",
    "ChainConfig", "ClockDomains", "ConfigError", "Effect", "EmptyChain",
    "EmptySplit", "FaultResponseModel", "FaultSpec", "Frame", "FuzzyInterval",
    "GlitchSimError", "IncompleteSweep", "Instruction", "NoIntegratedSuccess",
    "NotFound", "Outcome", "OverlapError", "RankedCombo", "RawTrialResult",
    "ScenarioSpec", "SearchConfig", "SearchSpace", "SecurityState",
    "SimContext", "Target", "TransferInvalid", "accumulate_relative",
    "apply_random_delays", "builtin_scenarios", "classify",
    "deterministic_model", "dup_register_model", "evaluate_repeatability",
    "execute_trial", "exhaustive_search", "fuzzyfy", "integrate",
    "load_config", "load_scenario", "merge_windows", "mix64", "nominal_combo",
    "run_attack_flow", "run_bod_eval", "run_chain_trial", "run_comparison",
    "run_countermeasure_eval", "run_exhaustive", "run_sweep_only",
    "run_trials", "run_wide_vs_narrow", "save_scenario", "set_enabled",
    "shift_model", "simulate_chain", "split_fault", "sweep",
    "ticks_from_ns", "transfer_parameters", "translate_to_relative",
    "tzm_model",
]
