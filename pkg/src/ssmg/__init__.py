"""
SSMG data model: games, validation, vector-payoff desugaring and the game file format.
"""

from src.ssmg.game import (
    Game,
    GameBuilder,
    GameModelError,
    InitializedGame,
    Transition,
    VectorPayoffGame,
    require_pure,
)
from src.ssmg.validation import GameValidationError, Violation, ViolationKind, validate
from src.ssmg.desugar import DesugarError, desugar, desugar_initialized
from src.ssmg.game_io import GameFormatError, game_from_dict, game_to_dict, load, save
from src.ssmg.random_games import random_game

__all__ = [
    'Game',
    'GameBuilder',
    'GameModelError',
    'InitializedGame',
    'Transition',
    'VectorPayoffGame',
    'require_pure',
    'GameValidationError',
    'Violation',
    'ViolationKind',
    'validate',
    'DesugarError',
    'desugar',
    'desugar_initialized',
    'GameFormatError',
    'game_from_dict',
    'game_to_dict',
    'load',
    'save',
    'random_game',
]
