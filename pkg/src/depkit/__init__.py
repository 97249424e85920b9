"""Transition-based dependency parsing for CoNLL treebanks."""

__version__ = "0.1.0"

from .conll import ConllDialect, ConllError, parse_feats, format_feats, read_conll, write_conll
from .core import (Sentence, Tagset, Token, ValidationReport, default_tagset, is_projective,
                   validate_sentence, validate_treebank)
from .evaluation import (attachment_by_deprel, attachment_scores, cohen_kappa, kappa_band,
                         prf_by_deprel)
from .features import FeatureTemplate, FeatureVocabulary, default_feature_model, extract, parse_feature_spec
from .learner import LinearModel, TrainOptions, predict_legal, score, train_classifier
from .pipeline import ParserModel, TrainReport, load_model, parse_sentence, save_model, train_parser
from .transitions import Configuration, Transition, derive_sequence, extract_tree, get_system

__all__ = [name for name in dir() if not name.startswith("_")]
