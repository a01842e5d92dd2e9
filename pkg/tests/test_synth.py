"""Generator determinism, calibration hooks, and oracle behavior."""

from dataclasses import replace

import pytest

from helpers import config, dataset, original, regular, retweet, seed
from viewdiv import (
    SynthParams,
    TweetKind,
    Wing,
    compute_all,
    generate,
    load_dataset,
    oracle_metrics,
    presets,
    seed_interaction_matrix,
    validate_config,
)
from viewdiv.ingest import tweet_to_line, user_to_line

SMALL = SynthParams(
    rng_seed=5, n_categories=3, n_seeds=6, n_regulars=6, homophily=0.5,
    tweets_per_seed=8, retweets_per_regular=7, replies_per_regular=3,
)


def _serialize(ds):
    return (
        [user_to_line(ds.users[u]) for u in sorted(ds.users)],
        [tweet_to_line(t) for t in ds.tweets],
    )


def test_same_seed_gives_identical_datasets():
    assert _serialize(generate(SMALL)) == _serialize(generate(SMALL))


def test_different_seed_gives_different_datasets():
    assert _serialize(generate(SMALL)) != _serialize(generate(replace(SMALL, rng_seed=6)))


def test_generated_datasets_validate():
    for s in range(5):
        ds = generate(replace(SMALL, rng_seed=s))
        assert validate_config(ds.config, ds.users) == []


def test_full_homophily_kills_direct_diversity():
    ds = generate(replace(SMALL, homophily=1.0, n_regulars=30))
    per_user, _ = compute_all(ds)
    values = [m.direct_source_diversity for m in per_user
              if m.direct_source_diversity is not None]
    assert values and all(v == 0.0 for v in values)


def test_zero_homophily_gives_high_direct_diversity():
    ds = generate(replace(presets()["uniform"], n_regulars=300))
    per_user, _ = compute_all(ds)
    values = [m.direct_source_diversity for m in per_user
              if m.direct_source_diversity is not None]
    assert sum(values) / len(values) >= 0.95


def test_minority_share_hits_target():
    for share in (0.05, 0.15, 0.3):
        ds = generate(replace(SMALL, n_seeds=12, tweets_per_seed=40,
                              minority_tweet_share=share))
        originals = [t for t in ds.tweets if t.kind is TweetKind.ORIGINAL]
        minority = [t for t in originals
                    if t.author_id in ds.config.minority_user_ids]
        assert len(minority) / len(originals) == pytest.approx(share, abs=0.02)


def test_infeasible_params_rejected():
    with pytest.raises(ValueError):
        generate(replace(SMALL, minority_categories=(), minority_tweet_share=1.0))
    with pytest.raises(ValueError):
        generate(replace(SMALL, minority_categories=(), minority_tweet_share=0.15))
    with pytest.raises(ValueError):
        generate(replace(SMALL, category_weights=(0.5, 0.2, 0.2)))  # sums to 0.9
    with pytest.raises(ValueError):
        generate(replace(SMALL, homophily=1.5))
    with pytest.raises(ValueError):
        generate(replace(SMALL, n_categories=1))
    with pytest.raises(ValueError):
        generate(replace(SMALL, minority_categories=("nope",)))
    # share 1.0 is representable when every category is minority
    ds = generate(replace(SMALL, minority_categories=("cat1", "cat2", "cat3"),
                          minority_tweet_share=1.0))
    assert all(t.author_id in ds.config.minority_user_ids
               for t in ds.tweets if t.kind is TweetKind.ORIGINAL)


def test_presets_names_and_extremes():
    available = presets()
    assert {"pluralist", "polarized", "uniform", "segregated"} <= set(available)
    assert available["uniform"].homophily == 0.0
    weights = available["uniform"].category_weights
    assert weights is None or len(set(weights)) == 1
    assert available["segregated"].homophily == 1.0
    for params in available.values():
        generate(replace(params, n_regulars=5))


def test_wing_matrix_tracks_configured_homophily():
    # symmetric population: 4 categories alternating left/right, uniform
    # weights; a seed's interactions hit its own wing with probability
    # h + (1 - h)/2
    h = 0.6
    params = SynthParams(
        rng_seed=3, n_categories=4, n_seeds=40, n_regulars=0, homophily=h,
        minority_categories=(), minority_tweet_share=0.0,
        tweets_per_seed=20, retweets_per_regular=30, replies_per_regular=10,
    )
    matrix = seed_interaction_matrix(generate(params))
    expected = h + (1 - h) / 2
    assert matrix.left_to_left == pytest.approx(expected, abs=0.07)
    assert matrix.right_to_right == pytest.approx(expected, abs=0.07)


def test_round_trip_through_ingest():
    ds = generate(SMALL)
    users_lines, tweet_lines = _serialize(ds)
    rebuilt, report, diags = load_dataset(
        ds.config, users_lines, tweet_lines, min_retweets=0
    )
    assert diags == [] and report.tweets_dropped_dangling == 0
    assert rebuilt.users == ds.users
    assert rebuilt.tweets == ds.tweets
    assert _serialize(rebuilt) == (users_lines, tweet_lines)


def test_oracle_refuses_large_datasets():
    ds = generate(replace(SMALL, n_seeds=20, n_regulars=300,
                          tweets_per_seed=40, retweets_per_regular=30))
    assert len(ds.tweets) > 10_000
    with pytest.raises(ValueError):
        oracle_metrics(ds)


def test_oracle_single_user_hand_computation():
    cfg = config({"a": "left", "b": "right"}, minorities=["s2"])
    users = [seed("s1", "a"), seed("s2", "b"), regular("u1", ["s1"])]
    tweets = [
        original("o1", "s1", 1),
        original("o2", "s1", 2),
        original("om", "s2", 3),
        retweet("r1", "s1", "om", 4),
        retweet("r2", "u1", "o1", 5),
        retweet("r3", "u1", "o2", 6),
    ]
    ds = dataset(cfg, users, tweets)
    per_user, matrix = oracle_metrics(ds)
    assert len(per_user) == 1
    m = per_user[0]
    # indirect = {o1, o2, om}: 2 of category a, 1 of b
    # entropy = -(2/3 ln 2/3 + 1/3 ln 1/3) / ln 2 = 0.63651/0.69315 = 0.91830
    assert m.direct_source_diversity == 0.0
    assert m.indirect_source_diversity == pytest.approx(0.9182958340544896, abs=1e-12)
    assert m.retweet_diversity == 0.0
    assert m.reply_diversity is None
    assert m.minority_reach == 1.0  # the only minority original arrived via r1
    assert m.minority_exposure == pytest.approx(1 / 3)
    assert m.io_correlated is True
    # input share 2/3 and output share 1 both clear the 1/2 + 0.15 floor
    assert m.io_correlated_15 is True
    # s1's retweet of om is one left-to-right seed interaction
    assert matrix.left_interactions == 1
    assert matrix.row(Wing.LEFT) == (0.0, 1.0)
    assert matrix.right_interactions == 0
