"""Language-generation metrics.

BLEU and its standardized variant are corpus-statistic metrics; GLEU,
ROUGE, chrF, TER, and the lexical METEOR variant are scored per pair and
composed by the generic reduce framework.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from ..core import MetricResult, ReferenceInstance
from ..errors import DegenerateCorpus, DegenerateInput, ParamError
from ..tokenizers import INTL, TOKENIZER_MODES, WHITESPACE, normalize_text, tokenize
from .base import CorpusMetric, InstanceMetric, TaskClass

SMOOTHINGS = ("none", "add_k", "exp")


def _ngram_counter(tokens: tuple[str, ...], order: int) -> Counter:
    if order == 1:
        return Counter(tokens)
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def _char_ngram_counter(text: str, order: int) -> Counter:
    # Substring keys hash faster than tuples of characters.
    return Counter(text[i : i + order] for i in range(len(text) - order + 1))


def _overlap(pred: Counter, ref: Counter) -> int:
    """Clipped match count: each n-gram credited at most its reference count."""
    return sum(min(c, ref[g]) for g, c in pred.items() if g in ref)


# ---------------------------------------------------------------------------
# BLEU family (corpus statistics)


@dataclass(frozen=True, slots=True)
class NGramStats:
    """Per-instance BLEU sufficient statistics; pooled by addition."""

    matches: tuple[int, ...]
    totals: tuple[int, ...]
    candidate_length: int
    reference_length: int

    def __add__(self, other: "NGramStats") -> "NGramStats":
        return NGramStats(
            tuple(a + b for a, b in zip(self.matches, other.matches)),
            tuple(a + b for a, b in zip(self.totals, other.totals)),
            self.candidate_length + other.candidate_length,
            self.reference_length + other.reference_length,
        )


def effective_reference_length(candidate_length: int, reference_lengths: list[int]) -> int:
    """Closest reference length to the candidate; shorter wins ties."""
    return min(reference_lengths, key=lambda r: (abs(r - candidate_length), r))


def bleu_instance_stats(
    prediction: str,
    references: ReferenceInstance | list[str],
    max_order: int = 4,
    tokenizer: str = WHITESPACE,
    normalize_unicode: bool = True,
) -> NGramStats:
    """Clipped n-gram matches per order plus the two length terms."""
    if max_order < 1:
        raise ParamError(f"max_order must be >= 1, got {max_order}")
    ref_texts = references.items if isinstance(references, ReferenceInstance) else references
    pred_tokens = tokenize(prediction, tokenizer, normalize_unicode)
    ref_tokens = [tokenize(r, tokenizer, normalize_unicode) for r in ref_texts]
    matches, totals = [], []
    for order in range(1, max_order + 1):
        pred_counts = _ngram_counter(pred_tokens, order)
        total = max(0, len(pred_tokens) - order + 1)
        if pred_counts:
            clip: Counter = Counter()
            for rt in ref_tokens:
                for gram, count in _ngram_counter(rt, order).items():
                    if count > clip[gram]:
                        clip[gram] = count
            matches.append(_overlap(pred_counts, clip))
        else:
            matches.append(0)
        totals.append(total)
    return NGramStats(
        tuple(matches),
        tuple(totals),
        len(pred_tokens),
        effective_reference_length(len(pred_tokens), [len(rt) for rt in ref_tokens]),
    )


def brevity_penalty(candidate_length: int, reference_length: int) -> float:
    if candidate_length > reference_length:
        return 1.0
    return math.exp(1.0 - reference_length / candidate_length)


def bleu_finalize(
    pooled: NGramStats,
    max_order: int = 4,
    smoothing: str = "none",
    smooth_k: float = 1.0,
    metric_name: str = "bleu",
) -> MetricResult:
    """Geometric mean of order precisions times the brevity penalty.

    Orders with no candidate n-grams at all are skipped, so degenerate
    short corpora are judged on the orders they can express. Without
    smoothing, any zero precision zeroes the score.
    """
    if smoothing not in SMOOTHINGS:
        raise ParamError(f"unknown smoothing: {smoothing!r}")
    if pooled.candidate_length == 0:
        raise DegenerateCorpus("candidate length is 0")
    bp = brevity_penalty(pooled.candidate_length, pooled.reference_length)
    components: dict[str, float] = {}
    log_sum = 0.0
    used = 0
    zero_raw = False
    smooth_scale = 1.0
    for order in range(1, max_order + 1):
        m, t = pooled.matches[order - 1], pooled.totals[order - 1]
        components[f"precision_{order}"] = m / t if t else 0.0
        if t == 0:
            continue
        used += 1
        if smoothing == "add_k":
            p = (m + smooth_k) / (t + smooth_k)
        elif m == 0:
            if smoothing == "exp":
                smooth_scale *= 2.0
                p = 1.0 / (smooth_scale * t)
            else:
                zero_raw = True
                continue
        else:
            p = m / t
        log_sum += math.log(p)
    score = 0.0 if zero_raw or used == 0 else bp * math.exp(log_sum / used)
    components["brevity_penalty"] = bp
    components["length_ratio"] = (
        pooled.candidate_length / pooled.reference_length if pooled.reference_length else 0.0
    )
    components["candidate_length"] = float(pooled.candidate_length)
    components["reference_length"] = float(pooled.reference_length)
    return MetricResult(metric_name, score, components)


def _sentence_bleu(stats: NGramStats, max_order: int) -> float:
    """Smoothed sentence-level score used to rank candidate predictions."""
    if stats.candidate_length == 0:
        return 0.0
    return bleu_finalize(stats, max_order, smoothing="exp").score


class BleuMetric(CorpusMetric):
    name = "bleu"
    task = TaskClass.LANGUAGE_GENERATION

    def __init__(
        self,
        max_order: int = 4,
        tokenizer: str = WHITESPACE,
        smoothing: str = "none",
        smooth_k: float = 1.0,
        normalize_unicode: bool = True,
    ):
        if max_order < 1:
            raise ParamError(f"max_order must be >= 1, got {max_order}")
        if tokenizer not in TOKENIZER_MODES:
            raise ParamError(f"unknown tokenizer mode: {tokenizer!r}")
        if smoothing not in SMOOTHINGS:
            raise ParamError(f"unknown smoothing: {smoothing!r}")
        self.max_order = max_order
        self.tokenizer = tokenizer
        self.smoothing = smoothing
        self.smooth_k = smooth_k
        self.normalize_unicode = normalize_unicode

    def instance_stats(self, prediction, references):
        return bleu_instance_stats(
            prediction, references, self.max_order, self.tokenizer, self.normalize_unicode
        )

    def provisional_score(self, prediction, references):
        return _sentence_bleu(self.instance_stats(prediction, references), self.max_order)

    def finalize(self, pooled):
        return bleu_finalize(pooled, self.max_order, self.smoothing, self.smooth_k, self.name)


class SacreBleuMetric(BleuMetric):
    """BLEU standardized for comparability: fixed tokenizer and smoothing.

    The tokenizer is part of the standard and may not be overridden; an
    all-empty candidate corpus scores 0 instead of erroring.
    """

    name = "sacrebleu"

    def __init__(self, max_order: int = 4, normalize_unicode: bool = True, **fixed):
        for key in ("tokenizer", "smoothing"):
            if fixed.pop(key, None) is not None:
                raise ParamError(f"sacrebleu fixes {key} and rejects overrides")
        if fixed:
            raise ParamError(f"unknown parameters: {sorted(fixed)}")
        super().__init__(
            max_order=max_order,
            tokenizer=INTL,
            smoothing="exp",
            normalize_unicode=normalize_unicode,
        )

    def compute(self, collection, policy, workers: int = 1):
        try:
            return super().compute(collection, policy, workers)
        except DegenerateCorpus:
            return MetricResult(self.name, 0.0, {"brevity_penalty": 0.0})


def sacrebleu_score(
    predictions: list[str], references: list[str | list[str]], max_order: int = 4
) -> MetricResult:
    from ..core import ReducePolicy, validate_collection

    collection = validate_collection(predictions, references)
    return SacreBleuMetric(max_order=max_order).compute(collection, ReducePolicy())


# ---------------------------------------------------------------------------
# GLEU


def gleu_score(
    prediction: str,
    reference: str,
    min_order: int = 1,
    max_order: int = 4,
    tokenizer: str = WHITESPACE,
    normalize_unicode: bool = True,
) -> float:
    """min(n-gram precision, n-gram recall) pooled over the order range."""
    pred = tokenize(prediction, tokenizer, normalize_unicode)
    ref = tokenize(reference, tokenizer, normalize_unicode)
    matched = pred_total = ref_total = 0
    for order in range(min_order, max_order + 1):
        p_counts = _ngram_counter(pred, order)
        r_counts = _ngram_counter(ref, order)
        matched += _overlap(p_counts, r_counts)
        pred_total += max(0, len(pred) - order + 1)
        ref_total += max(0, len(ref) - order + 1)
    if pred_total == 0 or ref_total == 0:
        return 1.0 if pred == ref else 0.0
    return min(matched / pred_total, matched / ref_total)


class GleuMetric(InstanceMetric):
    name = "gleu"
    task = TaskClass.LANGUAGE_GENERATION

    def __init__(
        self,
        min_order: int = 1,
        max_order: int = 4,
        tokenizer: str = WHITESPACE,
        normalize_unicode: bool = True,
    ):
        if not 1 <= min_order <= max_order:
            raise ParamError(f"need 1 <= min_order <= max_order, got {min_order}..{max_order}")
        if tokenizer not in TOKENIZER_MODES:
            raise ParamError(f"unknown tokenizer mode: {tokenizer!r}")
        self.min_order = min_order
        self.max_order = max_order
        self.tokenizer = tokenizer
        self.normalize_unicode = normalize_unicode

    def pair_score(self, prediction, reference):
        return gleu_score(
            prediction,
            reference,
            self.min_order,
            self.max_order,
            self.tokenizer,
            self.normalize_unicode,
        )


# ---------------------------------------------------------------------------
# ROUGE


def _fbeta(precision: float, recall: float, beta: float) -> float:
    if precision == 0.0 and recall == 0.0:
        return 0.0
    b2 = beta * beta
    return (1.0 + b2) * precision * recall / (recall + b2 * precision)


def rouge_n(
    prediction: str,
    reference: str,
    order: int = 1,
    beta: float = 1.0,
    tokenizer: str = WHITESPACE,
    normalize_unicode: bool = True,
) -> float:
    """N-gram overlap F-measure (recall-oriented family, F1 by default)."""
    if order < 1:
        raise ParamError(f"order must be >= 1, got {order}")
    pred = tokenize(prediction, tokenizer, normalize_unicode)
    ref = tokenize(reference, tokenizer, normalize_unicode)
    p_total = max(0, len(pred) - order + 1)
    r_total = max(0, len(ref) - order + 1)
    if p_total == 0 and r_total == 0:
        return 1.0 if pred == ref else 0.0
    if p_total == 0 or r_total == 0:
        return 0.0
    matched = _overlap(_ngram_counter(pred, order), _ngram_counter(ref, order))
    return _fbeta(matched / p_total, matched / r_total, beta)


def _lcs_length(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(
    prediction: str,
    reference: str,
    beta: float = 1.0,
    tokenizer: str = WHITESPACE,
    normalize_unicode: bool = True,
) -> float:
    """Longest-common-subsequence F-measure over tokens."""
    pred = tokenize(prediction, tokenizer, normalize_unicode)
    ref = tokenize(reference, tokenizer, normalize_unicode)
    if not pred and not ref:
        return 1.0
    if not pred or not ref:
        return 0.0
    lcs = _lcs_length(pred, ref)
    return _fbeta(lcs / len(pred), lcs / len(ref), beta)


class RougeNMetric(InstanceMetric):
    name = "rouge-n"
    task = TaskClass.LANGUAGE_GENERATION

    def __init__(
        self,
        order: int = 1,
        beta: float = 1.0,
        tokenizer: str = WHITESPACE,
        normalize_unicode: bool = True,
    ):
        if order < 1:
            raise ParamError(f"order must be >= 1, got {order}")
        if tokenizer not in TOKENIZER_MODES:
            raise ParamError(f"unknown tokenizer mode: {tokenizer!r}")
        self.order = order
        self.beta = beta
        self.tokenizer = tokenizer
        self.normalize_unicode = normalize_unicode

    def pair_score(self, prediction, reference):
        return rouge_n(
            prediction, reference, self.order, self.beta, self.tokenizer, self.normalize_unicode
        )


class RougeLMetric(InstanceMetric):
    name = "rouge-l"
    task = TaskClass.LANGUAGE_GENERATION

    def __init__(self, beta: float = 1.0, tokenizer: str = WHITESPACE, normalize_unicode: bool = True):
        if tokenizer not in TOKENIZER_MODES:
            raise ParamError(f"unknown tokenizer mode: {tokenizer!r}")
        self.beta = beta
        self.tokenizer = tokenizer
        self.normalize_unicode = normalize_unicode

    def pair_score(self, prediction, reference):
        return rouge_l(prediction, reference, self.beta, self.tokenizer, self.normalize_unicode)


# ---------------------------------------------------------------------------
# chrF


def chrf_score(
    prediction: str,
    reference: str,
    char_order: int = 6,
    word_order: int = 0,
    beta: float = 2.0,
    normalize_unicode: bool = True,
) -> float:
    """Character n-gram F-beta averaged over orders (whitespace removed).

    ``word_order`` > 0 additionally averages word n-gram F-scores in.
    Orders where neither side has any n-grams are skipped.
    """
    pred_text = normalize_text(prediction, normalize_unicode)
    ref_text = normalize_text(reference, normalize_unicode)
    if pred_text == ref_text:
        return 1.0
    pred_chars = "".join(pred_text.split())
    ref_chars = "".join(ref_text.split())
    layers: list[tuple] = [(pred_chars, ref_chars, char_order, _char_ngram_counter)]
    if word_order > 0:
        layers.append(
            (tuple(pred_text.split()), tuple(ref_text.split()), word_order, _ngram_counter)
        )
    total_f = 0.0
    used = 0
    for pred_units, ref_units, max_order, counter in layers:
        for order in range(1, max_order + 1):
            p_total = max(0, len(pred_units) - order + 1)
            r_total = max(0, len(ref_units) - order + 1)
            if p_total == 0 and r_total == 0:
                continue
            used += 1
            if p_total == 0 or r_total == 0:
                continue  # F is 0 for this order
            matched = _overlap(counter(pred_units, order), counter(ref_units, order))
            total_f += _fbeta(matched / p_total, matched / r_total, beta)
    if used == 0:
        return 1.0 if pred_chars == ref_chars else 0.0
    return total_f / used


class ChrfMetric(InstanceMetric):
    name = "chrf"
    task = TaskClass.LANGUAGE_GENERATION

    def __init__(
        self,
        char_order: int = 6,
        word_order: int = 0,
        beta: float = 2.0,
        normalize_unicode: bool = True,
    ):
        if char_order < 1 or word_order < 0:
            raise ParamError(f"bad orders: char {char_order}, word {word_order}")
        if beta <= 0:
            raise ParamError(f"beta must be positive, got {beta}")
        self.char_order = char_order
        self.word_order = word_order
        self.beta = beta
        self.normalize_unicode = normalize_unicode

    def pair_score(self, prediction, reference):
        return chrf_score(
            prediction,
            reference,
            self.char_order,
            self.word_order,
            self.beta,
            self.normalize_unicode,
        )


# ---------------------------------------------------------------------------
# TER


def _strip_common_affixes(a: tuple, b: tuple) -> tuple[tuple, tuple]:
    start = 0
    stop_a, stop_b = len(a), len(b)
    while start < stop_a and start < stop_b and a[start] == b[start]:
        start += 1
    while stop_a > start and stop_b > start and a[stop_a - 1] == b[stop_b - 1]:
        stop_a -= 1
        stop_b -= 1
    return a[start:stop_a], b[start:stop_b]


def _levenshtein(a: tuple, b: tuple) -> int:
    a, b = _strip_common_affixes(a, b)
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        append = cur.append
        for j, y in enumerate(b, 1):
            append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def _levenshtein_bounded(a: tuple, b: tuple, limit: int) -> int:
    """Exact distance when it is <= limit, otherwise limit + 1."""
    if limit < 0:
        return 0
    a, b = _strip_common_affixes(a, b)
    if abs(len(a) - len(b)) > limit:
        return limit + 1
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        append = cur.append
        best = i
        for j, y in enumerate(b, 1):
            value = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y))
            append(value)
            if value < best:
                best = value
        if best > limit:
            return limit + 1
        prev = cur
    return prev[-1] if prev[-1] <= limit else limit + 1


_MAX_SHIFT_SPAN = 10
_MAX_SHIFT_CANDIDATES = 400


def _candidate_shifts(hyp: tuple, ref: tuple):
    """Hypotheses reachable by moving one span onto a matching ref span.

    Only spans that occur verbatim in the reference are movable, and each
    is moved so it lands at the matching reference position; enumeration
    order is fixed for determinism.
    """
    positions: dict = {}
    for j, tok in enumerate(ref):
        positions.setdefault(tok, []).append(j)
    seen = set()
    for i in range(len(hyp)):
        for j in positions.get(hyp[i], ()):
            run = 1
            limit = min(_MAX_SHIFT_SPAN, len(hyp) - i, len(ref) - j)
            while run < limit and hyp[i + run] == ref[j + run]:
                run += 1
            for span in range(1, run + 1):
                rest = hyp[:i] + hyp[i + span :]
                at = min(j, len(rest))
                moved = rest[:at] + hyp[i : i + span] + rest[at:]
                if moved != hyp and moved not in seen:
                    seen.add(moved)
                    yield moved
                    if len(seen) >= _MAX_SHIFT_CANDIDATES:
                        return


def _bag_lower_bound(hyp: tuple, ref: tuple) -> int:
    """Edit-distance floor from token multisets; reordering cannot beat it."""
    surplus = Counter(hyp)
    surplus.subtract(Counter(ref))
    mismatch = sum(abs(c) for c in surplus.values())
    return max(abs(len(hyp) - len(ref)), (mismatch + 1) // 2)


def _ter_edits(hyp: tuple, ref: tuple) -> int:
    """Greedy shift search: apply the shift that most reduces the word
    edit distance, repeat while one helps, then charge the remaining
    distance."""
    if hyp == ref:
        return 0
    shifts = 0
    distance = _levenshtein(hyp, ref)
    # Shifts keep the token bag intact, so once the distance touches the
    # bag floor plus the cost of a shift no move can pay for itself.
    floor = _bag_lower_bound(hyp, ref)
    while distance >= floor + 2:
        best_gain = 0
        best_hyp = None
        best_distance = distance
        for moved in _candidate_shifts(hyp, ref):
            d = _levenshtein_bounded(moved, ref, distance - 2 - best_gain)
            gain = distance - d - 1  # the shift itself costs one edit
            if gain > best_gain:
                best_gain, best_hyp, best_distance = gain, moved, d
        if best_hyp is None:
            break
        shifts += 1
        hyp = best_hyp
        distance = best_distance
    return shifts + distance


def ter_score(
    prediction: str,
    reference: str,
    tokenizer: str = WHITESPACE,
    normalize_unicode: bool = True,
) -> float:
    """Edits (insert/delete/substitute/shift) per reference token."""
    ref = tokenize(reference, tokenizer, normalize_unicode)
    if not ref:
        raise DegenerateInput("TER reference is empty")
    pred = tokenize(prediction, tokenizer, normalize_unicode)
    # Interned token ids compare faster in the DP inner loops.
    ids: dict[str, int] = {}
    hyp_ids = tuple(ids.setdefault(t, len(ids)) for t in pred)
    ref_ids = tuple(ids.setdefault(t, len(ids)) for t in ref)
    return _ter_edits(hyp_ids, ref_ids) / len(ref)


class TerMetric(InstanceMetric):
    name = "ter"
    task = TaskClass.LANGUAGE_GENERATION
    higher_is_better = False

    def __init__(self, tokenizer: str = WHITESPACE, normalize_unicode: bool = True):
        if tokenizer not in TOKENIZER_MODES:
            raise ParamError(f"unknown tokenizer mode: {tokenizer!r}")
        self.tokenizer = tokenizer
        self.normalize_unicode = normalize_unicode

    def pair_score(self, prediction, reference):
        return ter_score(prediction, reference, self.tokenizer, self.normalize_unicode)


# ---------------------------------------------------------------------------
# METEOR (lexical variant)

_STEM_SUFFIXES = ("ings", "ing", "ies", "ied", "iest", "ier", "ed", "es", "er", "est", "ly", "s")


def light_stem(word: str) -> str:
    """Fixed suffix-stripping stemmer; no lexical database involved."""
    w = word[:-2] if word.endswith("'s") else word
    for suffix in _STEM_SUFFIXES:
        if w.endswith(suffix) and len(w) - len(suffix) >= 3:
            return w[: -len(suffix)]
    return w


def _stage_matches(pred_keys, ref_keys, matched_p, matched_r, pairs):
    for pi, key in enumerate(pred_keys):
        if matched_p[pi]:
            continue
        for rj, ref_key in enumerate(ref_keys):
            if not matched_r[rj] and ref_key == key:
                matched_p[pi] = matched_r[rj] = True
                pairs.append((pi, rj))
                break


def meteor_lite_score(
    prediction: str,
    reference: str,
    alpha: float = 0.9,
    beta: float = 3.0,
    gamma: float = 0.5,
    tokenizer: str = WHITESPACE,
    normalize_unicode: bool = True,
) -> float:
    """Unigram harmonic mean with a fragmentation penalty.

    Two match stages: exact (case-folded), then suffix-stripped stems.
    The synonym stage of the full metric is intentionally absent.
    """
    pred = [t.lower() for t in tokenize(prediction, tokenizer, normalize_unicode)]
    ref = [t.lower() for t in tokenize(reference, tokenizer, normalize_unicode)]
    if not pred or not ref:
        return 1.0 if pred == ref else 0.0
    matched_p = [False] * len(pred)
    matched_r = [False] * len(ref)
    pairs: list[tuple[int, int]] = []
    _stage_matches(pred, ref, matched_p, matched_r, pairs)
    _stage_matches(
        [light_stem(t) for t in pred], [light_stem(t) for t in ref], matched_p, matched_r, pairs
    )
    m = len(pairs)
    if m == 0:
        return 0.0
    precision = m / len(pred)
    recall = m / len(ref)
    fmean = precision * recall / (alpha * precision + (1.0 - alpha) * recall)
    pairs.sort()
    chunks = 1 + sum(
        1
        for prev, cur in zip(pairs, pairs[1:])
        if cur[0] != prev[0] + 1 or cur[1] != prev[1] + 1
    )
    penalty = gamma * (chunks / m) ** beta
    return fmean * (1.0 - penalty)


class MeteorLiteMetric(InstanceMetric):
    name = "meteor"
    task = TaskClass.LANGUAGE_GENERATION

    def __init__(
        self,
        alpha: float = 0.9,
        beta: float = 3.0,
        gamma: float = 0.5,
        tokenizer: str = WHITESPACE,
        normalize_unicode: bool = True,
    ):
        if tokenizer not in TOKENIZER_MODES:
            raise ParamError(f"unknown tokenizer mode: {tokenizer!r}")
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma
        self.tokenizer = tokenizer
        self.normalize_unicode = normalize_unicode

    def pair_score(self, prediction, reference):
        return meteor_lite_score(
            prediction,
            reference,
            self.alpha,
            self.beta,
            self.gamma,
            self.tokenizer,
            self.normalize_unicode,
        )

    def extra_components(self):
        # Match stages actually applied; the synonym stage is never run.
        return {"stage_exact": 1.0, "stage_stem": 1.0, "stage_synonym": 0.0}
