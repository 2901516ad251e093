import numpy as np
import pytest

from semncg.ranking import (
    align_model_summary,
    build_ground_truth,
    compute_relevance,
    sem_ncg_at_k,
)
from semncg.types import (
    AlignmentMatch,
    EmbeddingSet,
    GroundTruthRanking,
    ModelAlignment,
    RelevanceVector,
    SentenceSet,
)


def _sentences(set_id, *sentences, role="document"):
    return SentenceSet(id=set_id, role=role, sentences=tuple(sentences))


def _embeds(set_id, vectors):
    vectors = np.array(vectors, dtype=np.float64)
    return EmbeddingSet(sentence_set_id=set_id, dim=vectors.shape[1], vectors=vectors)


class TestComputeRelevance:
    def test_identical_unit_vector_reference(self):
        doc = _sentences("d", "a a", "b b", "c c")
        ref = _sentences("r", "a a", role="reference")
        doc_e = _embeds("d", [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        ref_e = _embeds("r", [[1, 0, 0]])
        rel = compute_relevance(doc, ref, doc_e, ref_e)
        assert rel.scores.tolist() == [1.0, 0.0, 0.0]

    def test_two_reference_sentences_average(self):
        doc = _sentences("d", "a a", "b b")
        ref = _sentences("r", "a a", "b b", role="reference")
        doc_e = _embeds("d", [[1, 0], [0, 1]])
        ref_e = _embeds("r", [[1, 0], [0, 1]])
        rel = compute_relevance(doc, ref, doc_e, ref_e)
        assert rel.scores.tolist() == [0.5, 0.5]

    def test_length_matches_document(self):
        rng = np.random.default_rng(3)
        doc = _sentences("d", *[f"w{i} w{i}" for i in range(7)])
        ref = _sentences("r", "w0 w1", "w2 w3", role="reference")
        rel = compute_relevance(
            doc, ref, _embeds("d", rng.normal(size=(7, 4))), _embeds("r", rng.normal(size=(2, 4)))
        )
        assert len(rel) == 7

    def test_dim_mismatch(self):
        doc = _sentences("d", "a a")
        ref = _sentences("r", "b b", role="reference")
        with pytest.raises(ValueError):
            compute_relevance(doc, ref, _embeds("d", [[1, 0]]), _embeds("r", [[1, 0, 0]]))


class TestBuildGroundTruth:
    def test_normalized_relevance(self):
        gt = build_ground_truth(RelevanceVector("d", np.array([0.2, 0.8])))
        assert gt.order == (1, 0)
        assert gt.gains.tolist() == [0.2, 0.8]

    def test_tie_prefers_lower_index(self):
        gt = build_ground_truth(RelevanceVector("d", np.array([0.5, 0.5])))
        assert gt.order == (0, 1)

    def test_all_zero_relevance_uniform(self):
        gt = build_ground_truth(RelevanceVector("d", np.array([0.0, 0.0, 0.0])))
        assert np.allclose(gt.gains, [1 / 3, 1 / 3, 1 / 3])

    def test_rank_position_scheme(self):
        gt = build_ground_truth(
            RelevanceVector("d", np.array([0.1, 0.9, 0.5])), scheme="rank_position"
        )
        # ranks: sentence 1 first, 2 second, 0 last; denominator 0+1+2 = 3
        assert gt.order == (1, 2, 0)
        assert np.allclose(gt.gains, [0.0, 2 / 3, 1 / 3])
        assert gt.gains.sum() == pytest.approx(1.0, abs=1e-12)

    def test_rank_position_single_sentence(self):
        gt = build_ground_truth(RelevanceVector("d", np.array([0.4])), scheme="rank_position")
        assert gt.gains.tolist() == [1.0]

    def test_scale_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            scores = rng.uniform(0.01, 1.0, size=6)
            base = build_ground_truth(RelevanceVector("d", scores))
            scaled = build_ground_truth(RelevanceVector("d", scores * 0.37))
            assert base.order == scaled.order
            assert np.allclose(base.gains, scaled.gains, atol=1e-12)


class TestAlignModelSummary:
    def test_exact_match(self):
        doc = _sentences("d", "first one here", "second one here", "third one here")
        model = _sentences("m", "Second one here.", role="model_summary")
        align = align_model_summary(model, doc)
        assert align.matches[0] == AlignmentMatch(0, 1, 1.0, "exact")

    def test_duplicated_model_sentences_map_to_same_doc_index(self):
        doc = _sentences(
            "d",
            "fans will see the new baby daughter tomorrow",
            "last week she was barely showing",
            "the timeline of the pregnancy is unconvincing",
        )
        model = _sentences(
            "m",
            "Fans will see the new baby daughter tomorrow.",
            "Last week she was barely showing.",
            "Last week she was barely showing.",
            role="model_summary",
        )
        align = align_model_summary(model, doc)
        assert [m.doc_index for m in align.matches] == [0, 1, 1]
        assert all(m.score == 1.0 for m in align.matches)

    def test_fuzzy_picks_highest_overlap(self):
        doc = _sentences("d", "a b x", "a b c q r")  # f1 vs model: 0.5 and 0.4
        model = _sentences("m", "a b p p p", role="model_summary")
        align = align_model_summary(model, doc)
        assert align.matches[0].doc_index == 0
        assert align.matches[0].method == "fuzzy"
        assert align.matches[0].score == pytest.approx(0.5)

    def test_zero_overlap_still_matches_with_score_zero(self):
        doc = _sentences("d", "alpha beta", "gamma delta")
        model = _sentences("m", "omega psi", role="model_summary")
        align = align_model_summary(model, doc)
        assert align.matches[0] == AlignmentMatch(0, 0, 0.0, "fuzzy")

    def test_fuzzy_tie_prefers_lower_index(self):
        doc = _sentences("d", "a b c", "a b c")  # duplicate doc sentence: not unique
        model = _sentences("m", "a b c", role="model_summary")
        align = align_model_summary(model, doc)
        assert align.matches[0].doc_index == 0
        assert align.matches[0].method == "fuzzy"
        assert align.matches[0].score == 1.0


def _gt(gains, order=None, doc_id="d"):
    gains = np.asarray(gains, dtype=np.float64)
    if order is None:
        order = tuple(sorted(range(len(gains)), key=lambda i: (-gains[i], i)))
    return GroundTruthRanking(
        doc_id=doc_id, order=order, gains=gains, gain_scheme="normalized_relevance"
    )


def _alignment(doc_indices, model_id="m"):
    return ModelAlignment(
        model_summary_id=model_id,
        matches=tuple(
            AlignmentMatch(i, int(idx), 1.0, "exact") for i, idx in enumerate(doc_indices)
        ),
    )


class TestSemNcgAtK:
    def test_ideal_topk_scores_one(self):
        gt = _gt([0.5, 0.3, 0.2])
        assert sem_ncg_at_k(gt, _alignment([1, 0]), 2) == 1.0
        assert sem_ncg_at_k(gt, _alignment([0, 1]), 2) == 1.0

    def test_hand_value(self):
        gt = _gt([0.5, 0.3, 0.2])
        assert sem_ncg_at_k(gt, _alignment([0, 2]), 2) == pytest.approx(0.875, abs=1e-12)

    def test_duplicate_pick_counted_once(self):
        gt = _gt([0.5, 0.3, 0.2])
        assert sem_ncg_at_k(gt, _alignment([0, 0, 0]), 3) == pytest.approx(0.5, abs=1e-12)

    def test_k_bounds_checked(self):
        gt = _gt([0.6, 0.4])
        with pytest.raises(ValueError):
            sem_ncg_at_k(gt, _alignment([0]), 2)  # k > model sentences
        with pytest.raises(ValueError):
            sem_ncg_at_k(gt, _alignment([0, 1, 1]), 3)  # k > doc sentences

    def test_permutation_of_first_k_is_invariant(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = 6
            scores = rng.uniform(0, 1, size=n)
            gt = build_ground_truth(RelevanceVector("d", scores))
            picks = rng.integers(0, n, size=3)
            base = sem_ncg_at_k(gt, _alignment(picks), 3)
            shuffled = rng.permutation(picks)
            assert sem_ncg_at_k(gt, _alignment(shuffled), 3) == base

    def test_swapping_in_higher_gain_never_decreases(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = 8
            gt = build_ground_truth(RelevanceVector("d", rng.uniform(0, 1, size=n)))
            picks = list(rng.choice(n, size=3, replace=False))
            base = sem_ncg_at_k(gt, _alignment(picks), 3)
            worst = min(picks, key=lambda i: gt.gains[i])
            better = [i for i in range(n) if gt.gains[i] > gt.gains[worst] and i not in picks]
            if not better:
                continue
            picks[picks.index(worst)] = better[0]
            assert sem_ncg_at_k(gt, _alignment(picks), 3) >= base
