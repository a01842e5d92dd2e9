"""Per-user viewpoint-diversity metrics and the seed interaction matrix.

All unit-interval metrics are ``None`` ("undefined") when the underlying
activity is empty; undefined values are excluded from population statistics
rather than coerced to 0, which would conflate inactivity with zero
diversity.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .exposure import CategoryHistogram, ExposureIndex, output_histograms
from .model import Dataset, TweetKind, UserKind, Wing


@dataclass(frozen=True)
class UserMetrics:
    user_id: str
    direct_source_diversity: float | None
    indirect_source_diversity: float | None
    retweet_diversity: float | None
    reply_diversity: float | None
    minority_reach: float | None
    minority_exposure: float | None
    io_correlated: bool | None
    io_correlated_15: bool | None


@dataclass(frozen=True)
class WingMatrix:
    """Row-normalized left/right interaction shares among seed users.

    Row = wing of the acting seed, column = wing of the retweeted/replied-to
    seed; unaligned actors and targets are excluded. A row with no
    interactions has zero cells.
    """

    left_to_left: float
    left_to_right: float
    right_to_left: float
    right_to_right: float
    left_interactions: int
    right_interactions: int

    def row(self, wing: Wing) -> tuple[float, float]:
        if wing is Wing.LEFT:
            return (self.left_to_left, self.left_to_right)
        if wing is Wing.RIGHT:
            return (self.right_to_left, self.right_to_right)
        raise ValueError("wing matrix has no unaligned row")


def normalized_entropy(hist: CategoryHistogram) -> float | None:
    """Shannon entropy of the category shares, normalized to [0, 1].

    Computed as -sum(p_i * ln(p_i)) / ln(n) over categories with positive
    count, where n is the configured category count (n >= 2 required). An
    empty histogram is undefined. Exactly 1.0 iff all n categories have the
    same positive count; exactly 0.0 iff a single category holds everything.
    The log base cancels between numerator and denominator.
    """
    if hist.n < 2:
        raise ValueError(f"normalized entropy needs n >= 2 categories, got {hist.n}")
    positive = [c for c in hist.counts.values() if c > 0]
    if any(c < 0 for c in hist.counts.values()):
        raise ValueError("histogram counts must be non-negative")
    if not positive:
        return None
    if len(positive) == 1:
        return 0.0
    if len(positive) == hist.n and len(set(positive)) == 1:
        return 1.0
    total = sum(positive)
    acc = 0.0
    for c in positive:
        p = c / total
        acc += p * math.log(p)
    return min(1.0, max(0.0, -acc / math.log(hist.n)))


def _entropy_of_counts(counts: dict[str, int], n: int) -> float | None:
    return normalized_entropy(CategoryHistogram(counts=counts, n=n))


def source_diversity(dataset: Dataset, user_id: str, mode: str = "direct") -> float | None:
    """Normalized entropy of the user's direct or indirect exposure histogram."""
    if mode not in ("direct", "indirect"):
        raise ValueError(f"mode must be 'direct' or 'indirect', got {mode!r}")
    index = ExposureIndex(dataset)
    timeline = index.timeline(user_id)
    ids = timeline.direct if mode == "direct" else timeline.indirect
    counts = Counter(
        index.category_of_seed[index.original_author[t]] for t in ids
    )
    return _entropy_of_counts(dict(counts), dataset.config.n_categories)


def output_diversity(dataset: Dataset, user_id: str, kind: str = "retweet") -> float | None:
    """Normalized entropy of the user's retweet or reply output histogram."""
    if kind not in ("retweet", "reply"):
        raise ValueError(f"kind must be 'retweet' or 'reply', got {kind!r}")
    retweet_hist, reply_hist = output_histograms(dataset, user_id)
    return normalized_entropy(retweet_hist if kind == "retweet" else reply_hist)


def minority_reach(dataset: Dataset, user_id: str) -> float | None:
    """Fraction of all published minority originals present in the user's
    indirect timeline; undefined when the dataset has no minority originals."""
    index = ExposureIndex(dataset)
    total_minority = len(index.minority_original_ids)
    if total_minority == 0:
        return None
    received = len(index.timeline(user_id).indirect & index.minority_original_ids)
    return received / total_minority


def minority_exposure(dataset: Dataset, user_id: str) -> float | None:
    """Share of the user's indirect timeline authored by minority seeds;
    undefined on an empty timeline."""
    index = ExposureIndex(dataset)
    indirect = index.timeline(user_id).indirect
    if not indirect:
        return None
    return len(indirect & index.minority_original_ids) / len(indirect)


def _dominant(counts: dict[str, int]) -> tuple[str | None, float]:
    """Unique argmax category and its share; (None, share) on a tie."""
    total = sum(counts.values())
    best = max(counts.values())
    winners = [c for c, v in counts.items() if v == best]
    share = best / total
    return (winners[0] if len(winners) == 1 else None), share


def _io_correlated(
    input_counts: dict[str, int],
    output_counts: dict[str, int],
    n: int,
    margin: float,
) -> bool | None:
    input_counts = {c: v for c, v in input_counts.items() if v > 0}
    output_counts = {c: v for c, v in output_counts.items() if v > 0}
    if not input_counts or not output_counts:
        return None
    in_cat, in_share = _dominant(input_counts)
    out_cat, out_share = _dominant(output_counts)
    if in_cat is None or out_cat is None:
        # no single dominant category on a tie
        return False
    if in_cat != out_cat:
        return False
    if margin > 0:
        floor = 1.0 / n + margin
        if in_share < floor or out_share < floor:
            return False
    return True


def io_correlation(dataset: Dataset, user_id: str, margin: float = 0.0) -> bool | None:
    """Whether the dominant received category equals the dominant retweeted one.

    Input is the indirect exposure histogram; output is the retweet
    histogram. Undefined when either is empty. With ``margin`` > 0, both
    dominant shares must additionally be at least ``1/n + margin`` above the
    uniform share, the reading used for the "bias above 15%" variant.
    """
    index = ExposureIndex(dataset)
    indirect = index.timeline(user_id).indirect
    input_counts = dict(
        Counter(index.category_of_seed[index.original_author[t]] for t in indirect)
    )
    retweet_hist, _ = output_histograms(dataset, user_id)
    return _io_correlated(
        input_counts, retweet_hist.counts, dataset.config.n_categories, margin
    )


def seed_interaction_matrix(dataset: Dataset) -> WingMatrix:
    """Left/right interaction shares over seed retweets and seed-to-seed replies.

    Requires the wing mapping to cover at least one Left and one Right
    category. Interactions whose actor or target is unaligned are skipped.
    """
    wings = {c.wing for c in dataset.config.categories}
    if Wing.LEFT not in wings or Wing.RIGHT not in wings:
        raise ValueError("wing mapping must cover at least one Left and one Right category")

    seed_wing: dict[str, Wing] = {}
    for u in dataset.users.values():
        if u.kind is UserKind.SEED:
            seed_wing[u.id] = dataset.config.wing_of(u.category)  # type: ignore[arg-type]

    cells = {
        (Wing.LEFT, Wing.LEFT): 0,
        (Wing.LEFT, Wing.RIGHT): 0,
        (Wing.RIGHT, Wing.LEFT): 0,
        (Wing.RIGHT, Wing.RIGHT): 0,
    }
    original_author = {
        t.id: t.author_id for t in dataset.tweets if t.kind is TweetKind.ORIGINAL
    }
    for t in dataset.tweets:
        actor_wing = seed_wing.get(t.author_id)
        if actor_wing is None or actor_wing is Wing.UNALIGNED:
            continue
        if t.kind is TweetKind.RETWEET:
            target_id = original_author[t.source_tweet_id]  # type: ignore[index]
        elif t.kind is TweetKind.REPLY:
            target_id = t.target_user_id  # type: ignore[assignment]
        else:
            continue
        target_wing = seed_wing.get(target_id or "")
        if target_wing is None or target_wing is Wing.UNALIGNED:
            continue
        cells[(actor_wing, target_wing)] += 1

    left_total = cells[(Wing.LEFT, Wing.LEFT)] + cells[(Wing.LEFT, Wing.RIGHT)]
    right_total = cells[(Wing.RIGHT, Wing.LEFT)] + cells[(Wing.RIGHT, Wing.RIGHT)]
    return WingMatrix(
        left_to_left=cells[(Wing.LEFT, Wing.LEFT)] / left_total if left_total else 0.0,
        left_to_right=cells[(Wing.LEFT, Wing.RIGHT)] / left_total if left_total else 0.0,
        right_to_left=cells[(Wing.RIGHT, Wing.LEFT)] / right_total if right_total else 0.0,
        right_to_right=cells[(Wing.RIGHT, Wing.RIGHT)] / right_total if right_total else 0.0,
        left_interactions=left_total,
        right_interactions=right_total,
    )


def compute_all(
    dataset: Dataset, io_margin: float = 0.15
) -> tuple[list[UserMetrics], WingMatrix]:
    """All metrics for every regular user plus the seed interaction matrix.

    Output order is sorted by user id, so reruns on the same dataset are
    byte-identical. ``io_margin`` parametrizes the ``io_correlated_15``
    column (default 0.15).

    This is the batch path: it builds one :class:`ExposureIndex`, takes one
    pass over the tweets for output histograms, and aggregates per-seed
    volumes instead of materializing each user's direct timeline (the direct
    parts of followed seeds never overlap, so only surfaced retweets need
    set deduplication).
    """
    index = ExposureIndex(dataset)
    n = dataset.config.n_categories
    minority_seed_ids = dataset.config.minority_user_ids
    total_minority = len(index.minority_original_ids)

    # per-seed aggregates for the no-set direct path
    seed_volume = {s: len(ids) for s, ids in index.originals_by_seed.items()}

    # one pass for every regular's output histograms
    retweet_counts: dict[str, Counter[str]] = {}
    reply_counts: dict[str, Counter[str]] = {}
    regular_ids = {
        u.id for u in dataset.users.values() if u.kind is UserKind.REGULAR
    }
    for t in dataset.tweets:
        if t.author_id not in regular_ids:
            continue
        if t.kind is TweetKind.RETWEET:
            cat = index.category_of_seed[index.original_author[t.source_tweet_id]]  # type: ignore[index]
            retweet_counts.setdefault(t.author_id, Counter())[cat] += 1
        elif t.kind is TweetKind.REPLY:
            target = dataset.users.get(t.target_user_id or "")
            if target is not None and target.kind is UserKind.SEED:
                reply_counts.setdefault(t.author_id, Counter())[target.category] += 1  # type: ignore[index]

    results: list[UserMetrics] = []
    for uid in sorted(regular_ids):
        user = dataset.users[uid]
        followees = user.followees

        direct_counts: Counter[str] = Counter()
        direct_total = 0
        direct_minority = 0
        for f in followees:
            vol = seed_volume.get(f, 0)
            if vol:
                direct_counts[index.category_of_seed[f]] += vol  # type: ignore[index]
                direct_total += vol
                if f in minority_seed_ids:
                    direct_minority += vol

        surfaced: set[str] = set()
        for f in followees:
            surfaced |= index.retweeted_by_seed.get(f, frozenset())
        indirect_counts = Counter(direct_counts)
        indirect_total = direct_total
        indirect_minority = direct_minority
        for tid in surfaced:
            author = index.original_author[tid]
            if author in followees:
                continue  # already received directly
            indirect_counts[index.category_of_seed[author]] += 1  # type: ignore[index]
            indirect_total += 1
            if author in minority_seed_ids:
                indirect_minority += 1

        rt = dict(retweet_counts.get(uid, Counter()))
        rp = dict(reply_counts.get(uid, Counter()))
        results.append(
            UserMetrics(
                user_id=uid,
                direct_source_diversity=_entropy_of_counts(dict(direct_counts), n),
                indirect_source_diversity=_entropy_of_counts(dict(indirect_counts), n),
                retweet_diversity=_entropy_of_counts(rt, n),
                reply_diversity=_entropy_of_counts(rp, n),
                minority_reach=(
                    indirect_minority / total_minority if total_minority else None
                ),
                minority_exposure=(
                    indirect_minority / indirect_total if indirect_total else None
                ),
                io_correlated=_io_correlated(dict(indirect_counts), rt, n, 0.0),
                io_correlated_15=_io_correlated(dict(indirect_counts), rt, n, io_margin),
            )
        )

    return results, seed_interaction_matrix(dataset)
