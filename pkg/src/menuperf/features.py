"""Encode a selection task plus user scores into the 523-dimensional model input.

Layout of the feature vector:

    [0:512]    semantic channel - element-wise average of the embeddings of
               two comma-joined sentences (all displayed items / targets only)
    [512:514]  WAIS channel - symbol search / 63, symbol coding / 135
    [514:523]  organization channel - per level (target position, list length,
               target character count), each clamped and divided by its
               normalizer; levels beyond the task depth stay zero

Embedding providers are pluggable: a table provider serves precomputed
text -> vector entries (so genuine pretrained sentence encodings can be used),
and a deterministic hash-based encoder keeps the package self-contained.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

import numpy as np

from .taxonomy import SelectionTask

__all__ = [
    "FeatureError",
    "EMBEDDING_DIM",
    "FEATURE_DIM",
    "SEMANTIC_SLICE",
    "WAIS_SLICE",
    "ORG_SLICE",
    "WaisScore",
    "OrganizationNormalizers",
    "EmbeddingProvider",
    "HashEmbedding",
    "TableEmbedding",
    "load_embedding_table",
    "write_embedding_table",
    "build_sentence_all_items",
    "build_sentence_targets",
    "semantic_vector",
    "organization_features",
    "assemble_features",
]

EMBEDDING_DIM = 512
WAIS_DIM = 2
ORG_LEVELS = 3
ORG_DIM = 3 * ORG_LEVELS
FEATURE_DIM = EMBEDDING_DIM + WAIS_DIM + ORG_DIM  # 523

SEMANTIC_SLICE = slice(0, EMBEDDING_DIM)
WAIS_SLICE = slice(EMBEDDING_DIM, EMBEDDING_DIM + WAIS_DIM)
ORG_SLICE = slice(EMBEDDING_DIM + WAIS_DIM, FEATURE_DIM)

SYMBOL_SEARCH_MAX = 63
SYMBOL_CODING_MAX = 135

_TOKEN_SPLIT = re.compile(r"[,\s]+")


class FeatureError(ValueError):
    """Raised for invalid scores, malformed tables, or failed lookups."""


@dataclass
class WaisScore:
    """Processing-speed subtest scores: symbol search and symbol coding."""

    symbol_search: int
    symbol_coding: int

    def __post_init__(self):
        if not 0 <= self.symbol_search <= SYMBOL_SEARCH_MAX:
            raise FeatureError(
                f"symbol_search must be in [0, {SYMBOL_SEARCH_MAX}], got {self.symbol_search}"
            )
        if not 0 <= self.symbol_coding <= SYMBOL_CODING_MAX:
            raise FeatureError(
                f"symbol_coding must be in [0, {SYMBOL_CODING_MAX}], got {self.symbol_coding}"
            )

    def normalized(self) -> np.ndarray:
        return np.array(
            [self.symbol_search / SYMBOL_SEARCH_MAX, self.symbol_coding / SYMBOL_CODING_MAX]
        )


@dataclass
class OrganizationNormalizers:
    """Divisors for the organization triples; values are clamped to the max first."""

    max_position: float = 16.0
    max_length: float = 16.0
    max_chars: float = 32.0


DEFAULT_NORMALIZERS = OrganizationNormalizers()


class EmbeddingProvider:
    """Deterministic text -> 512-vector encoder interface."""

    def embed(self, text: str) -> np.ndarray:
        raise NotImplementedError


class HashEmbedding(EmbeddingProvider):
    """Self-contained fallback encoder: tokens hash to reproducible unit vectors.

    Tokens are split on commas and whitespace; each token seeds a PCG64
    generator from its SHA-256 digest and draws a unit 512-vector. Token
    vectors are averaged and the result normalized, so the output is identical
    across runs and platforms. Empty text maps to the zero vector.
    """

    def __init__(self, dim: int = EMBEDDING_DIM):
        self.dim = dim
        self._token_cache: dict[str, np.ndarray] = {}

    def _token_vector(self, token: str) -> np.ndarray:
        vec = self._token_cache.get(token)
        if vec is None:
            seed = int.from_bytes(hashlib.sha256(token.encode("utf-8")).digest()[:8], "little")
            g = np.random.Generator(np.random.PCG64(seed))
            vec = g.standard_normal(self.dim)
            vec /= np.linalg.norm(vec)
            self._token_cache[token] = vec
        return vec

    def embed(self, text: str) -> np.ndarray:
        tokens = [tok for tok in _TOKEN_SPLIT.split(text.strip()) if tok]
        if not tokens:
            return np.zeros(self.dim)
        mean = np.mean([self._token_vector(tok) for tok in tokens], axis=0)
        norm = np.linalg.norm(mean)
        if norm == 0.0:
            return np.zeros(self.dim)
        return mean / norm


class TableEmbedding(EmbeddingProvider):
    """Serves exact-text lookups from a precomputed embedding table.

    Misses fall through to `fallback` when one is given, otherwise raise.
    """

    def __init__(self, table: dict[str, np.ndarray], fallback: EmbeddingProvider | None = None):
        for key, vec in table.items():
            if vec.shape != (EMBEDDING_DIM,):
                raise FeatureError(
                    f"table entry {key!r} has {vec.shape[0]} values, expected {EMBEDDING_DIM}"
                )
        self.table = table
        self.fallback = fallback

    def embed(self, text: str) -> np.ndarray:
        vec = self.table.get(text)
        if vec is not None:
            return vec
        if self.fallback is not None:
            return self.fallback.embed(text)
        raise FeatureError(f"no embedding table entry for text {text!r} and no fallback enabled")


def load_embedding_table(path) -> dict[str, np.ndarray]:
    """Read a table file: per line, the exact text key, a tab, 512 decimal values."""
    table: dict[str, np.ndarray] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise FeatureError(f"{path}:{lineno}: expected '<text>\\t<512 values>'")
            key, _, values = line.partition("\t")
            vec = np.array(values.split(), dtype=float)
            if vec.shape != (EMBEDDING_DIM,):
                raise FeatureError(
                    f"{path}:{lineno}: entry has {vec.shape[0]} values, expected {EMBEDDING_DIM}"
                )
            table[key] = vec
    return table


def write_embedding_table(path, table: dict[str, np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, vec in table.items():
            if "\t" in key or "\n" in key:
                raise FeatureError("table keys must not contain tabs or newlines")
            fh.write(key + "\t" + " ".join(repr(float(v)) for v in vec) + "\n")


def build_sentence_all_items(task: SelectionTask) -> str:
    """Sentence 1: every displayed item, level by level, in display order."""
    return ", ".join(item for level in task.levels for item in level.items)


def build_sentence_targets(task: SelectionTask) -> str:
    """Sentence 2: the per-level target labels only."""
    return ", ".join(task.targets())


def semantic_vector(task: SelectionTask, provider: EmbeddingProvider) -> np.ndarray:
    """Element-wise average of the two sentence embeddings."""
    e1 = provider.embed(build_sentence_all_items(task))
    e2 = provider.embed(build_sentence_targets(task))
    return 0.5 * (e1 + e2)


def organization_features(task: SelectionTask) -> np.ndarray:
    """Raw per-level triples (1-based target position, list length, target chars)."""
    out = np.zeros(ORG_DIM)
    for k, level in enumerate(task.levels[:ORG_LEVELS]):
        out[3 * k] = level.target_index + 1
        out[3 * k + 1] = len(level.items)
        out[3 * k + 2] = len(level.target)
    return out


def _normalize_org(raw: np.ndarray, norms: OrganizationNormalizers) -> np.ndarray:
    caps = np.tile([norms.max_position, norms.max_length, norms.max_chars], ORG_LEVELS)
    return np.minimum(raw, caps) / caps


def assemble_features(
    task: SelectionTask,
    wais: WaisScore,
    provider: EmbeddingProvider,
    normalizers: OrganizationNormalizers = DEFAULT_NORMALIZERS,
) -> np.ndarray:
    """The full 523-value model input for one task."""
    vec = np.concatenate(
        [
            semantic_vector(task, provider),
            wais.normalized(),
            _normalize_org(organization_features(task), normalizers),
        ]
    )
    assert vec.shape == (FEATURE_DIM,)
    return vec
