"""Retrieval chatbot over subtitle corpora: reply with the line after the closest match."""

from nextline.corpus import Corpus, DialogueLine, build_corpus
from nextline.distance import bow_distance, levenshtein
from nextline.engine import Engine, EngineConfig
from nextline.search import InvertedIndex, MatchResult, best_match, build_index
from nextline.srt import SubtitleCue, clean_cues, parse_srt
from nextline.textprep import TermVector, filter_tokens, normalize, preprocess, tokenize

__all__ = [
    "Corpus",
    "DialogueLine",
    "Engine",
    "EngineConfig",
    "InvertedIndex",
    "MatchResult",
    "SubtitleCue",
    "TermVector",
    "best_match",
    "bow_distance",
    "build_corpus",
    "build_index",
    "clean_cues",
    "filter_tokens",
    "levenshtein",
    "normalize",
    "parse_srt",
    "preprocess",
    "tokenize",
]

__version__ = "0.1.0"
