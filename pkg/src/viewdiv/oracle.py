"""Brute-force metric recomputation by exhaustive enumeration.

Ground truth for equivalence testing: every metric is recomputed directly
from its definition with plain loops over the tweet list, sharing nothing
with the metrics/exposure modules except the domain types and result
shapes. Deliberately unoptimized; duplication with the fast path is the
point. Guarded to small datasets.
"""

from __future__ import annotations

import math

from .metrics import UserMetrics, WingMatrix
from .model import Dataset, TweetKind, UserKind, Wing

MAX_ORACLE_TWEETS = 10_000


def _entropy(counts: list[int], n: int) -> float | None:
    total = sum(counts)
    if total == 0:
        return None
    acc = 0.0
    for c in counts:
        if c > 0:
            share = c / total
            acc -= share * math.log(share)
    return acc / math.log(n)


def _argmax_unique(by_cat: dict[str, int]) -> str | None:
    best = None
    best_count = -1
    tied = False
    for cat, count in by_cat.items():
        if count > best_count:
            best, best_count, tied = cat, count, False
        elif count == best_count:
            tied = True
    return None if tied else best


def oracle_metrics(
    dataset: Dataset, io_margin: float = 0.15
) -> tuple[list[UserMetrics], WingMatrix]:
    """Recompute everything ``metrics.compute_all`` produces, the slow way."""
    if len(dataset.tweets) > MAX_ORACLE_TWEETS:
        raise ValueError(
            f"oracle refuses datasets over {MAX_ORACLE_TWEETS} tweets "
            f"(got {len(dataset.tweets)})"
        )

    cfg = dataset.config
    n = cfg.n_categories
    seeds = {u.id: u for u in dataset.users.values() if u.kind is UserKind.SEED}

    all_minority_originals = set()
    for t in dataset.tweets:
        if (
            t.kind is TweetKind.ORIGINAL
            and t.author_id in seeds
            and t.author_id in cfg.minority_user_ids
        ):
            all_minority_originals.add(t.id)

    def originals_of(seed_id: str) -> set[str]:
        return {
            t.id
            for t in dataset.tweets
            if t.kind is TweetKind.ORIGINAL and t.author_id == seed_id
        }

    def author_of_original(tweet_id: str) -> str:
        for t in dataset.tweets:
            if t.id == tweet_id:
                return t.author_id
        raise KeyError(tweet_id)

    def histogram(original_ids: set[str]) -> dict[str, int]:
        by_cat = {c.id: 0 for c in cfg.categories}
        for oid in original_ids:
            by_cat[seeds[author_of_original(oid)].category] += 1
        return by_cat

    results: list[UserMetrics] = []
    regulars = sorted(
        u.id for u in dataset.users.values() if u.kind is UserKind.REGULAR
    )
    for uid in regulars:
        user = dataset.users[uid]

        direct: set[str] = set()
        for f in user.followees:
            direct |= originals_of(f)

        indirect = set(direct)
        for f in user.followees:
            for t in dataset.tweets:
                if t.kind is TweetKind.RETWEET and t.author_id == f:
                    indirect.add(t.source_tweet_id)

        direct_hist = histogram(direct)
        indirect_hist = histogram(indirect)

        rt_by_cat = {c.id: 0 for c in cfg.categories}
        reply_by_cat = {c.id: 0 for c in cfg.categories}
        for t in dataset.tweets:
            if t.author_id != uid:
                continue
            if t.kind is TweetKind.RETWEET:
                rt_by_cat[seeds[author_of_original(t.source_tweet_id)].category] += 1
            elif t.kind is TweetKind.REPLY and t.target_user_id in seeds:
                reply_by_cat[seeds[t.target_user_id].category] += 1

        minority_received = len(indirect & all_minority_originals)
        reach = (
            minority_received / len(all_minority_originals)
            if all_minority_originals
            else None
        )
        exposure = minority_received / len(indirect) if indirect else None

        def io(margin: float) -> bool | None:
            if not indirect or sum(rt_by_cat.values()) == 0:
                return None
            in_cat = _argmax_unique(indirect_hist)
            out_cat = _argmax_unique(rt_by_cat)
            if in_cat is None or out_cat is None or in_cat != out_cat:
                return False
            if margin > 0:
                in_share = indirect_hist[in_cat] / sum(indirect_hist.values())
                out_share = rt_by_cat[out_cat] / sum(rt_by_cat.values())
                if in_share < 1.0 / n + margin or out_share < 1.0 / n + margin:
                    return False
            return True

        results.append(
            UserMetrics(
                user_id=uid,
                direct_source_diversity=_entropy(list(direct_hist.values()), n),
                indirect_source_diversity=_entropy(list(indirect_hist.values()), n),
                retweet_diversity=_entropy(list(rt_by_cat.values()), n),
                reply_diversity=_entropy(list(reply_by_cat.values()), n),
                minority_reach=reach,
                minority_exposure=exposure,
                io_correlated=io(0.0),
                io_correlated_15=io(io_margin),
            )
        )

    cells = {
        (Wing.LEFT, Wing.LEFT): 0,
        (Wing.LEFT, Wing.RIGHT): 0,
        (Wing.RIGHT, Wing.LEFT): 0,
        (Wing.RIGHT, Wing.RIGHT): 0,
    }
    for t in dataset.tweets:
        actor = seeds.get(t.author_id)
        if actor is None:
            continue
        if t.kind is TweetKind.RETWEET:
            target_id = author_of_original(t.source_tweet_id)
        elif t.kind is TweetKind.REPLY:
            target_id = t.target_user_id
        else:
            continue
        target = seeds.get(target_id)
        if target is None:
            continue
        aw = cfg.wing_of(actor.category)
        tw = cfg.wing_of(target.category)
        if Wing.UNALIGNED in (aw, tw):
            continue
        cells[(aw, tw)] += 1

    lt = cells[(Wing.LEFT, Wing.LEFT)] + cells[(Wing.LEFT, Wing.RIGHT)]
    rt = cells[(Wing.RIGHT, Wing.LEFT)] + cells[(Wing.RIGHT, Wing.RIGHT)]
    matrix = WingMatrix(
        left_to_left=cells[(Wing.LEFT, Wing.LEFT)] / lt if lt else 0.0,
        left_to_right=cells[(Wing.LEFT, Wing.RIGHT)] / lt if lt else 0.0,
        right_to_left=cells[(Wing.RIGHT, Wing.LEFT)] / rt if rt else 0.0,
        right_to_right=cells[(Wing.RIGHT, Wing.RIGHT)] / rt if rt else 0.0,
        left_interactions=lt,
        right_interactions=rt,
    )
    return results, matrix
