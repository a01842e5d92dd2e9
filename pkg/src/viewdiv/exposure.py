"""Direct and indirect exposure timelines and their category histograms.

Timelines are sets of tweet ids: an original reaching a user along several
paths counts once. Every timeline member is an original authored by a seed;
a surfaced tweet is attributed to the original author's category, never the
retweeter's.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .model import Dataset, TweetKind, UserKind


@dataclass(frozen=True)
class ExposureTimeline:
    """A user's potential exposure: ``direct`` is always a subset of ``indirect``."""

    user_id: str
    direct: frozenset[str]
    indirect: frozenset[str]


@dataclass(frozen=True)
class CategoryHistogram:
    """Tweet counts per category id, normalized against the configured universe ``n``."""

    counts: dict[str, int]
    n: int

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def support(self) -> frozenset[str]:
        return frozenset(c for c, v in self.counts.items() if v > 0)


class ExposureIndex:
    """Per-seed lookups shared across many timeline computations.

    Building the index costs one pass over the tweets; afterwards each
    user's timeline is assembled from the per-seed pieces. All analysis of a
    dataset of any size should go through one shared index (as
    ``metrics.compute_all`` does) rather than the per-call convenience
    functions below.
    """

    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        seed_ids = {u.id for u in dataset.users.values() if u.kind is UserKind.SEED}
        self.original_author: dict[str, str] = {}
        originals_by_seed: dict[str, set[str]] = {s: set() for s in seed_ids}
        retweeted_by_seed: dict[str, set[str]] = {s: set() for s in seed_ids}

        for t in dataset.tweets:
            if t.kind is TweetKind.ORIGINAL and t.author_id in seed_ids:
                self.original_author[t.id] = t.author_id
                originals_by_seed[t.author_id].add(t.id)
            elif t.kind is TweetKind.RETWEET and t.author_id in seed_ids:
                # build_dataset guarantees the source is a seed-authored original
                retweeted_by_seed[t.author_id].add(t.source_tweet_id)  # type: ignore[arg-type]

        self.originals_by_seed = {s: frozenset(v) for s, v in originals_by_seed.items()}
        self.retweeted_by_seed = {s: frozenset(v) for s, v in retweeted_by_seed.items()}
        self.category_of_seed = {
            u.id: u.category for u in dataset.users.values() if u.kind is UserKind.SEED
        }
        self.minority_original_ids = frozenset(
            t for t, a in self.original_author.items()
            if a in dataset.config.minority_user_ids
        )

    def direct_ids(self, user_id: str) -> frozenset[str]:
        user = self.dataset.users[user_id]
        out: set[str] = set()
        for f in user.followees:
            out |= self.originals_by_seed.get(f, frozenset())
        return frozenset(out)

    def surfaced_ids(self, user_id: str) -> frozenset[str]:
        """Originals any followee retweeted (may overlap the direct part)."""
        user = self.dataset.users[user_id]
        out: set[str] = set()
        for f in user.followees:
            out |= self.retweeted_by_seed.get(f, frozenset())
        return frozenset(out)

    def timeline(self, user_id: str) -> ExposureTimeline:
        direct = self.direct_ids(user_id)
        return ExposureTimeline(
            user_id=user_id, direct=direct, indirect=direct | self.surfaced_ids(user_id)
        )


def direct_timeline(dataset: Dataset, user_id: str) -> ExposureTimeline:
    """Direct-only exposure: originals published by followed seeds.

    The returned timeline has no surfacing applied, so indirect == direct.
    Unknown user raises KeyError.
    """
    direct = ExposureIndex(dataset).direct_ids(user_id)
    return ExposureTimeline(user_id=user_id, direct=direct, indirect=direct)


def indirect_timeline(dataset: Dataset, user_id: str) -> ExposureTimeline:
    """Full exposure: direct plus originals surfaced by followees' retweets."""
    return ExposureIndex(dataset).timeline(user_id)


def category_histogram(dataset: Dataset, tweet_ids) -> CategoryHistogram:
    """Histogram a set of seed-authored originals by author category.

    Any member that is not a seed-authored original is a contract violation
    and raises ValueError.
    """
    counts: Counter[str] = Counter()
    for tid in tweet_ids:
        t = dataset.tweet(tid)
        author = dataset.users[t.author_id]
        if t.kind is not TweetKind.ORIGINAL or author.kind is not UserKind.SEED:
            raise ValueError(
                f"tweet {tid!r} is not a seed-authored original; "
                "timelines must contain only seed originals"
            )
        counts[author.category] += 1  # type: ignore[index]
    return CategoryHistogram(counts=dict(counts), n=dataset.config.n_categories)


def output_histograms(
    dataset: Dataset, user_id: str
) -> tuple[CategoryHistogram, CategoryHistogram]:
    """Histograms of a user's outgoing behavior: (retweets, replies).

    Retweets count the retweeted original's author category, one count per
    retweet record. Replies count the target seed's category; replies to
    non-seed users are excluded because they carry no category.
    """
    user = dataset.users[user_id]
    retweet_counts: Counter[str] = Counter()
    reply_counts: Counter[str] = Counter()
    for t in dataset.tweets:
        if t.author_id != user.id:
            continue
        if t.kind is TweetKind.RETWEET:
            src_author = dataset.users[dataset.tweet(t.source_tweet_id).author_id]  # type: ignore[arg-type]
            retweet_counts[src_author.category] += 1  # type: ignore[index]
        elif t.kind is TweetKind.REPLY:
            target = dataset.users.get(t.target_user_id or "")
            if target is not None and target.kind is UserKind.SEED:
                reply_counts[target.category] += 1  # type: ignore[index]
    n = dataset.config.n_categories
    return (
        CategoryHistogram(counts=dict(retweet_counts), n=n),
        CategoryHistogram(counts=dict(reply_counts), n=n),
    )
