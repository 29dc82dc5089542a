import pytest
from conftest import catalog

from treedecomp import (
    BetaFailure,
    InvalidPermutation,
    Labeling,
    MalformedInput,
    ResourceLimit,
    canonical_code,
    conjugate,
    find_beta,
    from_parent_map,
    phi_set,
    verify_beta,
    verify_graceful,
    verify_rho,
)


class TestVerifyBeta:
    def test_figure_labeling(self):
        t = from_parent_map(4, [0, 0, 1, 1])
        result = verify_beta(t, [0, 3, 2, 1])
        assert isinstance(result, Labeling)
        assert result.h == (0, 3, 3, 0)
        assert set(result.signed_labels) == {0, 1, 2, 3}

    def test_star_identity(self):
        for n in (1, 2, 5, 8):
            t = from_parent_map(n, [0] * n)
            result = verify_beta(t, range(n))
            assert isinstance(result, Labeling)
            assert result.signed_labels == tuple(range(n))

    def test_path3_identity_fails(self):
        t = from_parent_map(3, [0, 0, 1])
        result = verify_beta(t, [0, 1, 2])
        assert isinstance(result, BetaFailure)
        assert -1 in result.out_of_range
        assert sorted(result.signed_labels) == [-1, 0, 1]

    def test_duplicate_report(self):
        # n=4 path, identity: signed labels collide
        t = from_parent_map(4, [0, 0, 1, 2])
        result = verify_beta(t, [0, 1, 2, 3])
        assert isinstance(result, BetaFailure)
        assert result.duplicated or result.out_of_range

    def test_offending_vertices_named(self):
        t = from_parent_map(3, [0, 0, 1])
        result = verify_beta(t, [0, 1, 2])
        assert isinstance(result, BetaFailure)
        # vertex 2's signed label is -1
        assert (2, -1) in result.offending
        for w, lbl in result.offending:
            assert result.signed_labels[w] == lbl

    def test_invalid_permutation(self):
        t = from_parent_map(2, [0, 0])
        with pytest.raises(InvalidPermutation):
            verify_beta(t, [0, 0])

    def test_expansion_identity(self):
        # h(v) = v + (-1)^depth * gamma(v) at every vertex
        for n in range(1, 8):
            for entry in catalog(n):
                lab = find_beta(entry.tree, "first")
                h_tree = from_parent_map(n, lab.h)
                for v in range(n):
                    sign = 1 if h_tree.depth[v] % 2 == 0 else -1
                    assert lab.h[v] == v + sign * lab.gamma[v]


class TestFindBeta:
    def test_path3(self):
        t = from_parent_map(3, [0, 0, 1])
        lab = find_beta(t)
        assert lab.sigma == (0, 2, 1)

    def test_single_vertex(self):
        assert find_beta(from_parent_map(1, [0])).sigma == (0,)

    def test_single_edge(self):
        lab = find_beta(from_parent_map(2, [0, 0]))
        assert lab.sigma == (0, 1)
        assert set(lab.signed_labels) == {0, 1}

    def test_deterministic(self):
        t = from_parent_map(6, [0, 0, 1, 2, 0, 4])
        assert find_beta(t).sigma == find_beta(t).sigma

    def test_seeded_deterministic(self):
        t = from_parent_map(6, [0, 0, 1, 2, 0, 4])
        a = find_beta(t, seed=7)
        b = find_beta(t, seed=7)
        assert isinstance(a, Labeling) and a.sigma == b.sigma

    def test_cap(self):
        with pytest.raises(ResourceLimit):
            find_beta(from_parent_map(17, [0] * 17))

    def test_bad_mode(self):
        with pytest.raises(MalformedInput):
            find_beta(from_parent_map(1, [0]), mode="some")

    @pytest.mark.parametrize("n", range(1, 8))
    def test_all_mode_matches_exhaustive_phi(self, n):
        for entry in catalog(n):
            sigmas = [lab.sigma for lab in find_beta(entry.tree, "all")]
            assert sigmas == phi_set(entry.tree)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_invariant_under_conjugation(self, n):
        # re-searching a relabeled tree labels the same underlying tree
        rotation = tuple((i + 1) % n for i in range(n))
        for entry in catalog(n):
            relabeled = conjugate(entry.tree, rotation)
            lab = find_beta(relabeled, "first")
            assert isinstance(lab, Labeling)
            assert canonical_code(relabeled) == entry.canonical_code


class TestPhiSet:
    def test_single_edge(self):
        assert phi_set(from_parent_map(2, [0, 0])) == [(0, 1)]

    def test_single_vertex(self):
        assert phi_set(from_parent_map(1, [0])) == [(0,)]

    def test_figure_member(self):
        assert (0, 3, 2, 1) in phi_set(from_parent_map(4, [0, 0, 1, 1]))

    def test_lexicographic_order(self):
        phis = phi_set(from_parent_map(4, [0, 0, 1, 1]))
        assert phis == sorted(phis)

    def test_cap(self):
        with pytest.raises(ResourceLimit):
            phi_set(from_parent_map(10, [0] * 10))


class TestGraceful:
    def test_beta_implies_graceful_full_catalog(self):
        for n in range(1, 9):
            for entry in catalog(n):
                for lab in find_beta(entry.tree, "all"):
                    assert verify_graceful(entry.tree, lab.sigma).ok

    def test_star_identity(self):
        assert verify_graceful(from_parent_map(4, [0, 0, 0, 0]), range(4)).ok

    def test_path3_identity_fails(self):
        report = verify_graceful(from_parent_map(3, [0, 0, 1]), range(3))
        assert not report.ok
        assert report.duplicated == (1,)


class TestRho:
    def test_single_edge(self):
        assert verify_rho([(0, 1)], {0: 0, 1: 1}).ok

    def test_graceful_embeds_as_rho(self):
        # a graceful labeling of any catalog tree is a rho-labeling
        for n in range(2, 8):
            for entry in catalog(n):
                lab = find_beta(entry.tree, "first")
                edges = [
                    (v, entry.tree.g[v]) for v in range(n) if v != entry.tree.root
                ]
                labels = {v: lab.sigma[v] for v in range(n)}
                assert verify_rho(edges, labels).ok

    def test_duplicate_fails(self):
        report = verify_rho([(0, 1), (2, 3)], {0: 0, 1: 1, 2: 2, 3: 3})
        assert not report.ok
        assert report.duplicated == (1,)

    def test_malformed(self):
        with pytest.raises(MalformedInput):
            verify_rho([], {})
        with pytest.raises(MalformedInput):
            verify_rho([(0, 1)], {0: 0})
        with pytest.raises(MalformedInput):
            verify_rho([(0, 1)], {0: 5, 1: 1})
        with pytest.raises(MalformedInput):
            verify_rho([(0, 1), (1, 2)], {0: 0, 1: 0, 2: 1})


class TestBipartitionConsistency:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_near_alpha_property(self, n):
        # positive-sign endpoint always carries the smaller label
        for entry in catalog(n):
            lab = find_beta(entry.tree, "first")
            h_tree = from_parent_map(n, lab.h)
            for v in range(n):
                if v == h_tree.root:
                    continue
                if h_tree.depth[v] % 2 == 0:
                    assert v < lab.h[v]
                else:
                    assert lab.h[v] < v

    @pytest.mark.parametrize("n", range(2, 9))
    def test_label_zero_in_positive_partition(self, n):
        for entry in catalog(n):
            for lab in find_beta(entry.tree, "all")[:50]:
                h_tree = from_parent_map(n, lab.h)
                assert h_tree.depth[0] % 2 == 0
