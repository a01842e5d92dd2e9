"""Small constructors for in-memory test datasets."""

from __future__ import annotations

from viewdiv import (
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

WINGS = {"left": Wing.LEFT, "right": Wing.RIGHT, "unaligned": Wing.UNALIGNED}


def config(categories: dict[str, str], minorities=(), name="test") -> CountryConfig:
    """categories: {category_id: wing_name}."""
    return CountryConfig(
        name=name,
        categories=tuple(PoliticalCategory(cid, WINGS[w]) for cid, w in categories.items()),
        minority_user_ids=frozenset(minorities),
    )


def seed(uid: str, category: str, followees=()) -> UserRecord:
    return UserRecord(uid, UserKind.SEED, category=category, followees=frozenset(followees))


def regular(uid: str, followees=()) -> UserRecord:
    return UserRecord(uid, UserKind.REGULAR, followees=frozenset(followees))


def original(tid: str, author: str, ts: int = 0) -> TweetRecord:
    return TweetRecord(tid, author, TweetKind.ORIGINAL, timestamp=ts)


def retweet(tid: str, author: str, source: str, ts: int = 0) -> TweetRecord:
    return TweetRecord(tid, author, TweetKind.RETWEET, source_tweet_id=source, timestamp=ts)


def reply(tid: str, author: str, target: str, ts: int = 0) -> TweetRecord:
    return TweetRecord(tid, author, TweetKind.REPLY, target_user_id=target, timestamp=ts)


def dataset(cfg: CountryConfig, users, tweets) -> Dataset:
    """Assemble a Dataset, asserting the inputs are internally consistent."""
    user_map = {u.id: u for u in users}
    violations = validate_config(cfg, user_map)
    assert not violations, violations
    return Dataset(config=cfg, users=user_map, tweets=tuple(tweets))
