import math

import numpy as np
import pytest

from shopminer.harvest.dataset import ShopDataset
from shopminer.harvest.shops import Product, Shop
from shopminer.lda.model import LdaHyperparams, train
from shopminer.termrank.query import parse_record_count, query_products
from shopminer.termrank.ranking import (
    distinctiveness,
    relevance,
    saliency,
    term_probs,
    top_salient_terms,
    topic_given_word,
    topic_probs,
)
from tests.conftest import make_corpus, make_vocab

TS = "2020-04-01T00:00:00Z"


def shop(handle, titles_prices, category="file"):
    return Shop(
        handle=handle,
        products=[
            Product(title=t, price_usd=p, category=category) for t, p in titles_prices
        ],
        retrieved_at=TS,
    )


class TestRelevance:
    def test_lambda_one_equals_phi_order(self):
        rng = np.random.default_rng(21)
        vocab = make_vocab(12)
        for _ in range(10):
            phi = rng.dirichlet(np.ones(12), size=3)
            p_w = rng.dirichlet(np.ones(12))
            for topic in range(3):
                ranked = relevance(phi, p_w, topic, lam=1.0, vocab=vocab)
                by_phi = np.lexsort((np.arange(12), -phi[topic]))
                assert [t.term for t in ranked] == [vocab.term_of(int(w)) for w in by_phi]

    def test_lambda_zero_equals_lift_order(self):
        vocab = make_vocab(3)
        phi = np.array([[0.5, 0.3, 0.2]])
        p_w = np.array([0.6, 0.2, 0.2])  # lifts: 0.833, 1.5, 1.0
        ranked = relevance(phi, p_w, 0, lam=0.0, vocab=vocab)
        assert [t.term for t in ranked] == ["w001", "w002", "w000"]

    def test_hand_evaluated_three_term_scores(self):
        vocab = make_vocab(3)
        phi = np.array([[0.7, 0.2, 0.1]])
        p_w = np.array([0.6, 0.2, 0.2])
        ranked = relevance(phi, p_w, 0, lam=0.5, vocab=vocab)
        assert [t.term for t in ranked] == ["w000", "w001", "w002"]
        assert ranked[0].score == pytest.approx(-0.10126213205573704, abs=1e-12)
        assert ranked[1].score == pytest.approx(-0.8047189562170501, abs=1e-12)
        assert ranked[2].score == pytest.approx(-1.4978661367769954, abs=1e-12)

    def test_ranks_dense_from_one_descending(self):
        vocab = make_vocab(4)
        phi = np.array([[0.4, 0.3, 0.2, 0.1]])
        ranked = relevance(phi, np.full(4, 0.25), 0, lam=0.6, vocab=vocab)
        assert [t.rank for t in ranked] == [1, 2, 3, 4]
        assert all(a.score >= b.score for a, b in zip(ranked, ranked[1:]))


class TestSaliency:
    PHI = np.array([[0.7, 0.2, 0.05, 0.05], [0.1, 0.2, 0.3, 0.4]])
    PK = np.array([0.6, 0.4])
    PW = np.array([0.46, 0.2, 0.15, 0.19])  # mixture marginal of PHI under PK

    def test_uniform_association_words_have_zero_saliency(self):
        # word 1 has identical phi in both topics: p(k|w) == p(k)
        scores = self.PW * distinctiveness(self.PHI, self.PK)
        assert scores[1] < 1e-12

    def test_single_topic_word_distinctiveness_log2(self):
        phi = np.array([[0.5, 0.5], [0.0, 1.0]])
        p_k = np.array([0.5, 0.5])
        d = distinctiveness(phi, p_k)
        assert d[0] == pytest.approx(math.log(2), abs=1e-12)

    def test_hand_built_oracle_scores_and_order(self):
        vocab = make_vocab(4)
        ranked = saliency(self.PHI, self.PK, self.PW, vocab)
        by_term = {t.term: t.score for t in ranked}
        assert by_term["w000"] == pytest.approx(0.11529636299550892, abs=1e-9)
        assert by_term["w002"] == pytest.approx(0.05021929300715014, abs=1e-9)
        assert by_term["w003"] == pytest.approx(0.07906044398962914, abs=1e-9)
        assert [t.term for t in ranked] == ["w000", "w003", "w002", "w001"]

    def test_probability_sums(self):
        rng = np.random.default_rng(23)
        phi = rng.dirichlet(np.ones(6), size=3)
        p_k = rng.dirichlet(np.ones(3))
        pkw = topic_given_word(phi, p_k)
        np.testing.assert_allclose(pkw.sum(axis=1), 1.0, atol=1e-9)
        assert (saliency(phi, p_k, rng.dirichlet(np.ones(6)), make_vocab(6))[-1].score
                >= -1e-12)

    def test_saliency_nonnegative_fuzz(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            phi = rng.dirichlet(np.ones(5), size=2) + 1e-9
            phi /= phi.sum(axis=1, keepdims=True)
            p_k = rng.dirichlet(np.ones(2))
            p_w = rng.dirichlet(np.ones(5))
            for ts in saliency(phi, p_k, p_w, make_vocab(5)):
                assert ts.score >= -1e-12


class TestTopSalientTerms:
    def corpus_model(self):
        # topic-segregated corpus: words 0-2 in half the docs, 3-5 in the rest
        docs = [[0, 1, 2, 0, 1, 2]] * 5 + [[3, 4, 5, 3, 4, 5]] * 5
        corpus = make_corpus(docs, 6)
        return train(corpus, LdaHyperparams(k=2, iterations=150, seed=31))

    def test_zero_n_returns_empty(self):
        assert top_salient_terms(self.corpus_model(), 0, 0) == []

    def test_trained_model_probability_sums(self):
        model = self.corpus_model()
        assert term_probs(model).sum() == pytest.approx(1.0, abs=1e-9)
        assert topic_probs(model).sum() == pytest.approx(1.0, abs=1e-9)

    def test_terms_owned_by_requested_topic(self):
        model = self.corpus_model()
        block_a, block_b = {"w000", "w001", "w002"}, {"w003", "w004", "w005"}
        top0 = set(top_salient_terms(model, 0, 3))
        top1 = set(top_salient_terms(model, 1, 3))
        assert (top0 <= block_a and top1 <= block_b) or (
            top0 <= block_b and top1 <= block_a
        )


class TestQueryProducts:
    def dataset(self):
        return ShopDataset(
            shops=[
                shop(
                    "combos",
                    [
                        ("Combo List | 528M Yahoo.com", 400.0),
                        ("Full DB dump", 120.0),
                        ("dbrand skin sticker", 9.0),
                        ("Plain old account", 3.0),
                    ],
                ),
                shop("other", [("267 Million Records Database", 500.0)]),
            ]
        )

    def test_whole_token_match(self):
        matches = query_products(self.dataset(), ["combo"])
        assert [m.product.title for m in matches] == ["Combo List | 528M Yahoo.com"]
        assert matches[0].matched_terms == ["combo"]

    def test_augmentation_db_matches_but_not_substring(self):
        matches = query_products(self.dataset(), ["database"], augment=["db"])
        titles = [m.product.title for m in matches]
        assert "Full DB dump" in titles
        assert "267 Million Records Database" in titles
        assert all("dbrand" not in t for t in titles)

    def test_no_term_hits_gives_empty(self):
        assert query_products(self.dataset(), ["nothere"]) == []

    def test_sorted_by_price_then_title(self):
        matches = query_products(self.dataset(), ["database", "combo"], augment=["db"])
        prices = [m.product.price_usd for m in matches]
        assert prices == sorted(prices, reverse=True)

    def test_result_subset_and_term_permutation_invariant(self):
        ds = self.dataset()
        all_titles = {p.title for _, p in ds.products()}
        a = query_products(ds, ["combo", "database"], augment=["db"])
        b = query_products(ds, ["database", "combo"], augment=["db"])
        assert {m.product.title for m in a} <= all_titles
        assert [m.product.title for m in a] == [m.product.title for m in b]

    def test_multi_token_term_requires_all_tokens(self):
        ds = ShopDataset(shops=[shop("s", [("Combo List Fresh", 1.0), ("Combo Only", 2.0)])])
        matches = query_products(ds, ["combo list"])
        assert [m.product.title for m in matches] == ["Combo List Fresh"]

    def test_record_count_annotated(self):
        matches = query_products(self.dataset(), ["combo"])
        assert matches[0].record_count == 528_000_000


class TestParseRecordCount:
    @pytest.mark.parametrize(
        "title,expected",
        [
            ("Combo List | 528M Yahoo.com", 528_000_000),
            ("Facebook - 267 Million Records Breach [FULL DB]", 267_000_000),
            ("151k USA Valid Mail Access", 151_000),
            ("MyHeritage - 92.2 Million Records", 92_200_000),
            ("SNAPCHAT | 4,6M LINES", 4_600_000),
            ("Evony: 28.7 Million + 13.8 Million Records", 28_700_000),
            ("no numbers here", None),
            ("version 2 update", None),
        ],
    )
    def test_cases(self, title, expected):
        assert parse_record_count(title) == expected
