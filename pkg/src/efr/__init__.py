"""Extensive-form regret minimization with behavioral and partial-sequence deviations."""
from .game import (CHANCE, TERMINAL, BehavioralStrategy, Game, GameBuilder, GameError,
                   StrategyProfile, counterfactual_value, counterfactual_values,
                   expected_utility, game_from_text, immediate_cf_regret, reach_prob,
                   validate_perfect_recall)
from .games import GameSpec, build_game

__version__ = "0.1.0"

__all__ = ["CHANCE", "TERMINAL", "BehavioralStrategy", "Game", "GameBuilder", "GameError",
           "StrategyProfile", "counterfactual_value", "counterfactual_values", "expected_utility",
           "game_from_text", "immediate_cf_regret", "reach_prob", "validate_perfect_recall",
           "GameSpec", "build_game"]
