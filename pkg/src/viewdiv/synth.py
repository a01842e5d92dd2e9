"""Synthetic population generator with controllable homophily.

The generative model is a simple mixture: each regular user has a "home"
category, and any category-directed choice (who to follow, what to retweet,
whom to reply to) puts probability mass h on the home category and spreads
1 - h uniformly over all n categories. h = 0 gives category-blind behavior,
h = 1 a fully segregated population. Seeds use the same mixture around
their own category for retweets and replies, which is what shapes the wing
interaction matrix.

Volume model: non-minority seeds draw their original-tweet counts from
Poisson(tweets_per_seed); the minority pool's total volume is set so the
minority share of all originals hits ``minority_tweet_share`` (within
integer rounding) and is split multinomially across minority seeds.
Per-user retweet and reply counts are Poisson around the configured means.

Generation is single-threaded and fully deterministic for a fixed
``rng_seed``: one numpy Generator, fixed draw order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import (
    CountryConfig,
    Dataset,
    PoliticalCategory,
    TweetKind,
    TweetRecord,
    UserKind,
    UserRecord,
    Wing,
    validate_config,
)

# Base follow probability at h = 0; scaled by the mixture so that a home
# category at high h is followed with probability up to 1.
FOLLOW_DENSITY = 0.5

# Seeds retweet/reply at this multiple of the regular-user activity means.
# Seed retweets are what surface tweets into followers' indirect timelines,
# so this also sets the strength of indirect exposure.
SEED_ACTIVITY_FACTOR = 0.5


@dataclass(frozen=True)
class SynthParams:
    """Generator knobs. ``category_weights`` / ``minority_categories`` of
    None mean uniform weights and {last category} respectively."""

    rng_seed: int = 0
    n_categories: int = 5
    category_weights: tuple[float, ...] | None = None
    n_seeds: int = 50
    n_regulars: int = 200
    homophily: float = 0.5
    minority_categories: tuple[str, ...] | None = None
    minority_tweet_share: float = 0.15
    tweets_per_seed: float = 30.0
    retweets_per_regular: float = 10.0
    replies_per_regular: float = 4.0


def _category_ids(n: int) -> list[str]:
    return [f"cat{i + 1}" for i in range(n)]


def _apportion(total: int, weights: tuple[float, ...]) -> list[int]:
    """Largest-remainder apportionment; deterministic, ties to lower index."""
    quotas = [total * w for w in weights]
    base = [math.floor(q) for q in quotas]
    leftover = total - sum(base)
    order = sorted(range(len(weights)), key=lambda i: (-(quotas[i] - base[i]), i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def _resolve(params: SynthParams) -> tuple[SynthParams, list[str], list[int]]:
    """Validate params; returns (resolved params, category ids, seeds per category)."""
    p = params
    if p.n_categories < 2:
        raise ValueError(f"n_categories must be >= 2, got {p.n_categories}")
    if p.n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    if p.n_regulars < 0:
        raise ValueError("n_regulars must be >= 0")
    if not 0.0 <= p.homophily <= 1.0:
        raise ValueError(f"homophily must be in [0, 1], got {p.homophily}")
    if not 0.0 <= p.minority_tweet_share <= 1.0:
        raise ValueError("minority_tweet_share must be in [0, 1]")
    if min(p.tweets_per_seed, p.retweets_per_regular, p.replies_per_regular) < 0:
        raise ValueError("volume means must be non-negative")
    if p.rng_seed < 0:
        raise ValueError("rng_seed must be non-negative")

    cat_ids = _category_ids(p.n_categories)
    if p.category_weights is None:
        weights = tuple(1.0 / p.n_categories for _ in cat_ids)
    else:
        weights = tuple(float(w) for w in p.category_weights)
        if len(weights) != p.n_categories:
            raise ValueError(
                f"category_weights has {len(weights)} entries for "
                f"{p.n_categories} categories"
            )
        if any(w < 0 for w in weights):
            raise ValueError("category_weights must be non-negative")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise ValueError(f"category_weights sum to {sum(weights)}, expected 1")

    if p.minority_categories is None:
        minority = (cat_ids[-1],)
    else:
        minority = tuple(p.minority_categories)
        unknown = set(minority) - set(cat_ids)
        if unknown:
            raise ValueError(f"minority_categories not in universe: {sorted(unknown)}")

    seeds_per_cat = _apportion(p.n_seeds, weights)
    minority_seats = sum(
        c for c, cid in zip(seeds_per_cat, cat_ids) if cid in minority
    )
    if p.minority_tweet_share > 0 and minority_seats == 0:
        raise ValueError(
            "minority_tweet_share > 0 but no seed lands in a minority category"
        )
    if p.minority_tweet_share >= 1.0 and minority_seats < p.n_seeds:
        raise ValueError(
            "minority_tweet_share of 1.0 requires every seed to be minority"
        )

    resolved = replace(p, category_weights=weights, minority_categories=minority)
    return resolved, cat_ids, seeds_per_cat


def _mixture(home_idx: int, h: float, n: int) -> np.ndarray:
    m = np.full(n, (1.0 - h) / n)
    m[home_idx] += h
    return m


def generate(params: SynthParams) -> Dataset:
    """Generate a validated Dataset; byte-identical for identical params."""
    p, cat_ids, seeds_per_cat = _resolve(params)
    n = p.n_categories
    h = p.homophily
    weights = np.asarray(p.category_weights, dtype=float)
    minority_cats = set(p.minority_categories or ())
    rng = np.random.default_rng(p.rng_seed)

    categories = tuple(
        PoliticalCategory(cid, Wing.LEFT if i % 2 == 0 else Wing.RIGHT)
        for i, cid in enumerate(cat_ids)
    )

    # seeds in category order, ids s0001..; regulars u000001..
    seed_ids: list[str] = []
    seed_cat_idx: list[int] = []
    for ci, count in enumerate(seeds_per_cat):
        for _ in range(count):
            seed_ids.append(f"s{len(seed_ids) + 1:04d}")
            seed_cat_idx.append(ci)
    is_minority_seed = [cat_ids[ci] in minority_cats for ci in seed_cat_idx]
    minority_user_ids = frozenset(
        sid for sid, m in zip(seed_ids, is_minority_seed) if m
    )

    # original volumes: Poisson for the non-minority pool, share-targeted
    # total for the minority pool
    volumes = np.zeros(len(seed_ids), dtype=int)
    nm_idx = [i for i, m in enumerate(is_minority_seed) if not m]
    m_idx = [i for i, m in enumerate(is_minority_seed) if m]
    share = p.minority_tweet_share
    if share >= 1.0:
        if m_idx:
            volumes[m_idx] = rng.poisson(p.tweets_per_seed, size=len(m_idx))
    else:
        if nm_idx:
            volumes[nm_idx] = rng.poisson(p.tweets_per_seed, size=len(nm_idx))
        nm_total = int(volumes[nm_idx].sum()) if nm_idx else 0
        if share > 0:
            if nm_total == 0:
                raise ValueError(
                    "non-minority seeds produced no originals; cannot target "
                    f"minority share {share} (raise tweets_per_seed)"
                )
            target = round(share / (1.0 - share) * nm_total)
            if target > 0:
                split = rng.multinomial(target, np.full(len(m_idx), 1.0 / len(m_idx)))
                volumes[m_idx] = split

    tweets: list[TweetRecord] = []
    clock = 0

    def next_id() -> str:
        return f"t{len(tweets) + 1:08d}"

    originals_by_seed: list[list[str]] = []
    for si, sid in enumerate(seed_ids):
        own: list[str] = []
        for _ in range(int(volumes[si])):
            clock += 1
            tid = next_id()
            tweets.append(
                TweetRecord(id=tid, author_id=sid, kind=TweetKind.ORIGINAL, timestamp=clock)
            )
            own.append(tid)
        originals_by_seed.append(own)

    # per-category candidate structure: seed indexes and their volumes
    seeds_in_cat: list[list[int]] = [[] for _ in range(n)]
    for si, ci in enumerate(seed_cat_idx):
        seeds_in_cat[ci].append(si)

    def draw_original(cat: int, exclude_seed: int | None) -> str | None:
        """Volume-weighted seed choice within a category, then a uniform
        original of that seed; None when the category has no candidates."""
        cands = [
            si for si in seeds_in_cat[cat]
            if si != exclude_seed and volumes[si] > 0
        ]
        if not cands:
            return None
        vols = np.array([volumes[si] for si in cands], dtype=float)
        si = cands[int(rng.choice(len(cands), p=vols / vols.sum()))]
        k = int(rng.integers(0, volumes[si]))
        return originals_by_seed[si][k]

    def split_by_mixture(k: int, mix: np.ndarray, usable: np.ndarray) -> np.ndarray:
        """Split k draws over categories by the mixture restricted to usable
        ones (uniform fallback when the restricted mass is zero)."""
        w = mix * usable
        total = w.sum()
        if total <= 0.0:
            if not usable.any() or k == 0:
                return np.zeros(n, dtype=int)
            w = usable.astype(float)
            total = w.sum()
        return rng.multinomial(k, w / total)

    # seed activity: retweets of other seeds' originals, replies to other seeds
    for si, sid in enumerate(seed_ids):
        mix = _mixture(seed_cat_idx[si], h, n)
        usable_rt = np.array(
            [
                any(volumes[sj] > 0 and sj != si for sj in seeds_in_cat[ci])
                for ci in range(n)
            ]
        )
        k_rt = int(rng.poisson(SEED_ACTIVITY_FACTOR * p.retweets_per_regular))
        for ci, cnt in enumerate(split_by_mixture(k_rt, mix, usable_rt)):
            for _ in range(int(cnt)):
                src = draw_original(ci, exclude_seed=si)
                if src is None:
                    continue
                clock += 1
                tweets.append(
                    TweetRecord(
                        id=next_id(), author_id=sid, kind=TweetKind.RETWEET,
                        source_tweet_id=src, timestamp=clock,
                    )
                )
        usable_rp = np.array(
            [any(sj != si for sj in seeds_in_cat[ci]) for ci in range(n)]
        )
        k_rp = int(rng.poisson(SEED_ACTIVITY_FACTOR * p.replies_per_regular))
        for ci, cnt in enumerate(split_by_mixture(k_rp, mix, usable_rp)):
            cands = [sj for sj in seeds_in_cat[ci] if sj != si]
            for _ in range(int(cnt)):
                target = seed_ids[cands[int(rng.integers(0, len(cands)))]]
                clock += 1
                tweets.append(
                    TweetRecord(
                        id=next_id(), author_id=sid, kind=TweetKind.REPLY,
                        target_user_id=target, timestamp=clock,
                    )
                )

    # regulars: home category, Bernoulli follows, mixture-directed activity
    regular_ids = [f"u{i + 1:06d}" for i in range(p.n_regulars)]
    home_draws = rng.choice(n, size=p.n_regulars, p=weights) if p.n_regulars else []
    followees_of: list[list[int]] = []
    for ri in range(p.n_regulars):
        home = int(home_draws[ri])
        mix = _mixture(home, h, n)
        follow_p = np.minimum(1.0, FOLLOW_DENSITY * n * mix)
        draws = rng.random(len(seed_ids))
        follows = [si for si in range(len(seed_ids)) if draws[si] < follow_p[seed_cat_idx[si]]]
        if not follows:
            # guarantee at least one followee so direct exposure is defined
            usable = np.array([bool(seeds_in_cat[ci]) for ci in range(n)])
            w = mix * usable
            if w.sum() <= 0:
                w = usable.astype(float)
            ci = int(rng.choice(n, p=w / w.sum()))
            follows = [seeds_in_cat[ci][int(rng.integers(0, len(seeds_in_cat[ci])))]]
        followees_of.append(follows)

    users: dict[str, UserRecord] = {}
    for si, sid in enumerate(seed_ids):
        users[sid] = UserRecord(id=sid, kind=UserKind.SEED, category=cat_ids[seed_cat_idx[si]])

    for ri, rid in enumerate(regular_ids):
        follows = followees_of[ri]
        home = int(home_draws[ri])
        mix = _mixture(home, h, n)
        followed_in_cat: list[list[int]] = [[] for _ in range(n)]
        for si in follows:
            followed_in_cat[seed_cat_idx[si]].append(si)

        usable_rt = np.array(
            [any(volumes[si] > 0 for si in followed_in_cat[ci]) for ci in range(n)]
        )
        k_rt = int(rng.poisson(p.retweets_per_regular))
        for ci, cnt in enumerate(split_by_mixture(k_rt, mix, usable_rt)):
            cands = [si for si in followed_in_cat[ci] if volumes[si] > 0]
            if not cands:
                continue
            vols = np.array([volumes[si] for si in cands], dtype=float)
            for _ in range(int(cnt)):
                si = cands[int(rng.choice(len(cands), p=vols / vols.sum()))]
                k = int(rng.integers(0, volumes[si]))
                clock += 1
                tweets.append(
                    TweetRecord(
                        id=next_id(), author_id=rid, kind=TweetKind.RETWEET,
                        source_tweet_id=originals_by_seed[si][k], timestamp=clock,
                    )
                )

        usable_rp = np.array([bool(followed_in_cat[ci]) for ci in range(n)])
        k_rp = int(rng.poisson(p.replies_per_regular))
        for ci, cnt in enumerate(split_by_mixture(k_rp, mix, usable_rp)):
            cands = followed_in_cat[ci]
            for _ in range(int(cnt)):
                target = seed_ids[cands[int(rng.integers(0, len(cands)))]]
                clock += 1
                tweets.append(
                    TweetRecord(
                        id=next_id(), author_id=rid, kind=TweetKind.REPLY,
                        target_user_id=target, timestamp=clock,
                    )
                )

        users[rid] = UserRecord(
            id=rid,
            kind=UserKind.REGULAR,
            followees=frozenset(seed_ids[si] for si in follows),
        )

    config = CountryConfig(
        name="synthetic",
        categories=categories,
        minority_user_ids=minority_user_ids,
    )
    violations = validate_config(config, users)
    if violations:  # pragma: no cover - generator invariant
        raise AssertionError(f"generator produced invalid dataset: {violations}")
    return Dataset(config=config, users=users, tweets=tuple(tweets))


def presets() -> dict[str, SynthParams]:
    """Named parameter sets.

    ``uniform`` and ``segregated`` are the h = 0 / h = 1 extremes.
    ``pluralist`` models a low-polarization population (moderate homophily,
    well-connected minority); ``polarized`` a heavily polarized one (strong
    homophily, dominant majority category, marginal minority). Both
    calibrated presets share one five-category universe (so they can be
    compared directly), keep the minority share of published tweets at 15%,
    and differ sharply in how much of the minority output reaches users.
    """
    return {
        "uniform": SynthParams(
            rng_seed=7,
            n_categories=5,
            n_seeds=50,
            n_regulars=500,
            homophily=0.0,
            minority_tweet_share=0.15,
        ),
        "segregated": SynthParams(
            rng_seed=7,
            n_categories=5,
            n_seeds=50,
            n_regulars=500,
            homophily=1.0,
            minority_tweet_share=0.15,
        ),
        # calibrated so population mean minority reach lands near 0.17 with
        # few users under 0.05
        "pluralist": SynthParams(
            rng_seed=11,
            n_categories=5,
            category_weights=(0.28, 0.28, 0.29, 0.075, 0.075),
            n_seeds=200,
            n_regulars=2000,
            homophily=0.85,
            minority_categories=("cat4", "cat5"),
            minority_tweet_share=0.15,
            tweets_per_seed=30.0,
            retweets_per_regular=10.0,
            replies_per_regular=4.0,
        ),
        # calibrated so population mean minority reach lands near 0.04 with
        # most users under 0.05; shares the pluralist category universe so
        # the two presets are directly comparable
        "polarized": SynthParams(
            rng_seed=11,
            n_categories=5,
            category_weights=(0.56, 0.24, 0.16, 0.02, 0.02),
            n_seeds=90,
            n_regulars=2000,
            homophily=0.95,
            minority_categories=("cat4", "cat5"),
            minority_tweet_share=0.15,
            tweets_per_seed=30.0,
            retweets_per_regular=10.0,
            replies_per_regular=4.0,
        ),
    }
