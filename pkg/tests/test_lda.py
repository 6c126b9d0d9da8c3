import itertools

import numpy as np
import pytest

from shopminer.errors import ConfigurationError, DataError
from shopminer.lda.model import (
    LdaHyperparams,
    LdaModel,
    collapsed_conditional,
    dominant_topic,
    dominant_topic_counts,
    estimate_phi,
    estimate_theta,
    load_model,
    save_model,
    train,
)
from tests.conftest import make_corpus, make_vocab, random_corpus


def small_corpus():
    return make_corpus([[0, 1, 0, 2], [2, 1, 2], [3, 3, 0]], n_terms=4)


class TestHyperparams:
    def test_alpha_rule_default(self):
        assert LdaHyperparams(k=10).alpha_value == pytest.approx(0.5)
        assert LdaHyperparams(k=4, alpha=2.0).alpha_value == 2.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"k": 1},
            {"k": 2, "alpha": 0.0},
            {"k": 2, "beta": -1.0},
            {"k": 2, "iterations": 0},
            {"k": 2, "iterations": 5, "average_samples": 6},
        ],
    )
    def test_invalid_values_rejected(self, kwargs):
        with pytest.raises(ConfigurationError):
            LdaHyperparams(**kwargs)


class TestCollapsedConditional:
    def test_hand_evaluated_weights(self):
        # docs-topic row [1,0], word column [2,0], topic totals [4,1], V=3
        weights = collapsed_conditional([1, 0], [2, 0], [4, 1], alpha=0.5, beta=0.01, n_terms=3)
        assert weights[0] == pytest.approx(0.7481389578163771, abs=1e-12)
        assert weights[1] == pytest.approx(0.0048543689320388345, abs=1e-12)

    def test_proportional_to_product_form(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            k = int(rng.integers(2, 6))
            nd = rng.integers(0, 9, size=k)
            nw = rng.integers(0, 9, size=k)
            nk = nw + rng.integers(0, 9, size=k)
            got = collapsed_conditional(nd, nw, nk, 0.3, 0.07, 11)
            want = [(nd[t] + 0.3) * (nw[t] + 0.07) / (nk[t] + 11 * 0.07) for t in range(k)]
            np.testing.assert_allclose(got, want, rtol=0, atol=0)


class TestTrain:
    def test_deterministic_given_seed(self):
        corpus = small_corpus()
        hp = LdaHyperparams(k=2, iterations=1, seed=123)
        first = train(corpus, hp)
        second = train(corpus, hp)
        assert np.array_equal(first.z, second.z)
        assert np.array_equal(first.n_kw, second.n_kw)

    def test_different_seeds_usually_differ(self):
        corpus = make_corpus([[0, 1, 2, 3, 0, 1, 2, 3] * 4], n_terms=4)
        a = train(corpus, LdaHyperparams(k=3, iterations=3, seed=1))
        b = train(corpus, LdaHyperparams(k=3, iterations=3, seed=2))
        assert not np.array_equal(a.z, b.z)

    def test_counts_match_assignments_exactly(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            corpus = random_corpus(rng)
            k = int(rng.integers(2, 5))
            if k >= corpus.n_tokens:
                continue
            model = train(corpus, LdaHyperparams(k=k, iterations=int(rng.integers(1, 5)), seed=7))
            n_dk, n_kw, n_k = model.recount()
            assert np.array_equal(n_dk, model.n_dk)
            assert np.array_equal(n_kw, model.n_kw)
            assert np.array_equal(n_k, model.n_k)

    def test_degenerate_k_rejected(self):
        corpus = small_corpus()  # 10 tokens
        with pytest.raises(ConfigurationError):
            train(corpus, LdaHyperparams(k=10, iterations=1))
        with pytest.raises(ConfigurationError):
            train(make_corpus([], 4), LdaHyperparams(k=2, iterations=1))

    def test_tiny_vocabulary_rejected(self):
        with pytest.raises(ConfigurationError):
            train(make_corpus([[0, 0, 0]], 1), LdaHyperparams(k=2, iterations=1))

    def test_single_word_docs_concentrate(self):
        # each doc repeats one distinct word; with k = #words the words should
        # separate onto their own topics under some permutation
        n_words = 4
        corpus = make_corpus([[w] * 20 for w in range(n_words)], n_terms=n_words)
        model = train(corpus, LdaHyperparams(k=n_words, iterations=200, seed=11))
        phi = estimate_phi(model)
        best = max(
            min(phi[perm[w]][w] for w in range(n_words))
            for perm in itertools.permutations(range(n_words))
        )
        assert best >= 0.9

    def test_exchangeability_under_token_shuffling(self):
        # per-topic mass distributions (sorted, seed-marginalized) should not
        # depend on token order within documents
        base_docs = [[0, 0, 1, 1, 2], [2, 2, 3, 3, 0], [1, 3, 1, 3, 2]]
        shuffled = [list(reversed(d)) for d in base_docs]

        def mean_sorted_mass(docs):
            masses = []
            for seed in range(30):
                model = train(
                    make_corpus(docs, 4), LdaHyperparams(k=2, iterations=60, seed=seed)
                )
                masses.append(np.sort(model.n_k / model.n_k.sum()))
            return np.mean(masses, axis=0)

        a, b = mean_sorted_mass(base_docs), mean_sorted_mass(shuffled)
        assert 0.5 * np.abs(a - b).sum() <= 0.05


class TestEstimators:
    def make_model(self, n_kw, n_dk, alpha=0.5, beta=0.01):
        n_kw = np.asarray(n_kw, dtype=np.int64)
        n_dk = np.asarray(n_dk, dtype=np.int64)
        k, n_terms = n_kw.shape
        return LdaModel(
            hyperparams=LdaHyperparams(k=k, alpha=alpha, beta=beta, iterations=1, seed=0),
            vocabulary=make_vocab(n_terms),
            doc_handles=[f"d{i}" for i in range(n_dk.shape[0])],
            doc_ids=np.zeros(0, dtype=np.int32),
            word_ids=np.zeros(0, dtype=np.int32),
            z=np.zeros(0, dtype=np.int32),
            n_dk=n_dk,
            n_kw=n_kw,
            n_k=n_kw.sum(axis=1),
        )

    def test_phi_uniform_on_empty_topic(self):
        model = self.make_model([[0, 0, 0], [3, 1, 0]], [[2, 2]])
        phi = estimate_phi(model)
        np.testing.assert_allclose(phi[0], [1 / 3] * 3)

    def test_phi_single_word_mass_formula(self):
        n, beta, v = 1000, 0.01, 3
        model = self.make_model([[n, 0, 0], [0, 1, 1]], [[2, 2]], beta=beta)
        phi = estimate_phi(model)
        assert phi[0][0] == pytest.approx((n + beta) / (n + v * beta), rel=0, abs=1e-15)

    def test_phi_rows_sum_to_one_fuzz(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            n_kw = rng.integers(0, 50, size=(int(rng.integers(2, 6)), int(rng.integers(2, 9))))
            model = self.make_model(n_kw, [[1, 1]])
            phi = estimate_phi(model)
            np.testing.assert_allclose(phi.sum(axis=1), 1.0, atol=1e-9)
            assert (phi > 0).all()

    def test_theta_uniform_on_empty_doc_row(self):
        model = self.make_model([[1, 1], [1, 1]], [[0, 0], [3, 1]], alpha=0.5)
        theta = estimate_theta(model)
        np.testing.assert_allclose(theta[0], [0.5, 0.5])

    def test_theta_formula_echo(self):
        model = self.make_model([[1, 1], [1, 1]], [[3, 1]], alpha=0.5)
        theta = estimate_theta(model)
        assert theta[0][0] == pytest.approx((3 + 0.5) / (4 + 2 * 0.5))

    def test_theta_rows_sum_to_one_fuzz(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            n_dk = rng.integers(0, 50, size=(int(rng.integers(1, 6)), 3))
            model = self.make_model(np.ones((3, 4), dtype=int), n_dk)
            theta = estimate_theta(model)
            np.testing.assert_allclose(theta.sum(axis=1), 1.0, atol=1e-9)
            assert (theta > 0).all()


class TestDominantTopic:
    def test_argmax(self):
        assert dominant_topic([0.1, 0.7, 0.2]) == 1

    def test_tie_breaks_low_index(self):
        assert dominant_topic([0.25, 0.25, 0.25, 0.25]) == 0

    def test_counts_histogram(self):
        theta = np.array([[0.9, 0.1], [0.2, 0.8], [0.6, 0.4]])
        assert dominant_topic_counts(theta).tolist() == [2, 1]


class TestAveraging:
    def test_averaged_estimates_stored_and_row_stochastic(self):
        corpus = small_corpus()
        hp = LdaHyperparams(k=2, iterations=20, seed=5, average_samples=10)
        model = train(corpus, hp)
        assert model.phi_avg is not None and model.theta_avg is not None
        np.testing.assert_allclose(estimate_phi(model).sum(axis=1), 1.0, atol=1e-9)
        np.testing.assert_allclose(estimate_theta(model).sum(axis=1), 1.0, atol=1e-9)

    def test_averaging_deterministic(self):
        corpus = small_corpus()
        hp = LdaHyperparams(k=2, iterations=20, seed=5, average_samples=10)
        a, b = train(corpus, hp), train(corpus, hp)
        np.testing.assert_array_equal(a.z, b.z)
        np.testing.assert_allclose(a.phi_avg, b.phi_avg, rtol=0, atol=0)


class TestSerialization:
    def test_round_trip_reproduces_distributions_bit_exactly(self, tmp_path):
        corpus = small_corpus()
        model = train(corpus, LdaHyperparams(k=2, iterations=30, seed=9))
        path = tmp_path / "model.npz"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.hyperparams == model.hyperparams
        assert loaded.doc_handles == model.doc_handles
        np.testing.assert_array_equal(loaded.z, model.z)
        assert np.array_equal(estimate_phi(loaded), estimate_phi(model))
        assert np.array_equal(estimate_theta(loaded), estimate_theta(model))

    def test_round_trip_with_averaging(self, tmp_path):
        corpus = small_corpus()
        model = train(corpus, LdaHyperparams(k=2, iterations=8, seed=9, average_samples=4))
        path = tmp_path / "model.npz"
        save_model(model, path)
        loaded = load_model(path)
        assert np.array_equal(estimate_phi(loaded), estimate_phi(model))

    def test_corrupt_header_rejected(self, tmp_path):
        path = tmp_path / "model.npz"
        np.savez(path, header=np.frombuffer(b'{"format_version": 99}', dtype=np.uint8))
        with pytest.raises(DataError):
            load_model(path)
