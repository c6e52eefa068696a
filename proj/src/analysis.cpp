// SPDX-License-Identifier: Apache-2.0
#include "palinverse/analysis.hpp"

#include <algorithm>
#include <numeric>

#include "palinverse/error.hpp"
#include "palinverse/paramspace.hpp"
#include "palinverse/spectral.hpp"

namespace palinverse {

namespace {

struct DisjointSets {
    std::vector<Index> parent;
    explicit DisjointSets(Index n) : parent(size_t(n)) { std::iota(parent.begin(), parent.end(), Index(0)); }
    Index find(Index i) {
        while (parent[size_t(i)] != i) i = parent[size_t(i)] = parent[size_t(parent[size_t(i)])];
        return i;
    }
    void join(Index a, Index b) { parent[size_t(find(a))] = find(b); }
};

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

struct Cluster {
    Complex centre;
    std::vector<Index> members;
};

// Single-linkage clusters of `values`, ordered by (|centre|, arg centre).
std::vector<Cluster> cluster(const std::vector<Complex>& values, double tol) {
    const Index m = Index(values.size());
    DisjointSets sets(m);
    for (Index a = 0; a < m; ++a)
        for (Index b = a + 1; b < m; ++b)
            if (close(values[size_t(a)], values[size_t(b)], tol)) sets.join(a, b);
    std::vector<Cluster> out;
    std::vector<Index> slot(size_t(m), -1);
    for (Index a = 0; a < m; ++a) {
        Index root = sets.find(a);
        if (slot[size_t(root)] < 0) {
            slot[size_t(root)] = Index(out.size());
            out.push_back({});
        }
        out[size_t(slot[size_t(root)])].members.push_back(a);
    }
    for (auto& c : out) {
        Complex sum = 0.0;
        for (Index i : c.members) sum += values[size_t(i)];
        c.centre = sum / double(c.members.size());
    }
    std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
        if (std::abs(a.centre) != std::abs(b.centre)) return std::abs(a.centre) < std::abs(b.centre);
        return std::arg(a.centre) < std::arg(b.centre);
    });
    return out;
}

void require_nonsingular(const Matrix& m, const char* what) {
    if (m.rows() != m.cols() || !numerically_nonsingular(m, 1e-12))
        throw Error(ErrorCode::SingularInput, std::string(what) + " is singular");
}

// Part index of every cluster; pairs (μ, μ⋆) share a part.
struct Grouping {
    ZetaPartition zeta;
    std::vector<Index> part_of_cluster;
};

Grouping group_clusters(const std::vector<Cluster>& clusters, SymmetryClass cls, double tol) {
    Grouping g;
    g.part_of_cluster.assign(clusters.size(), -1);
    for (size_t c = 0; c < clusters.size(); ++c) {
        if (g.part_of_cluster[c] >= 0) continue;
        const Complex mu = clusters[c].centre;
        const Index mult = Index(clusters[c].members.size());
        const Index part = g.zeta.cardinality();
        if (close(mu, star(mu, cls.star), tol)) {
            if (mult % 2 != 0)
                throw Error(ErrorCode::StructureViolation, "a self-paired value of S~S^-1 has odd multiplicity");
            g.zeta.parts.push_back(mult / 2);
            g.zeta.self_paired.push_back(true);
        } else {
            size_t partner = clusters.size();
            for (size_t d = 0; d < clusters.size(); ++d)
                if (d != c && g.part_of_cluster[d] < 0 && close(clusters[d].centre, star(mu, cls.star), tol))
                    partner = d;
            if (partner == clusters.size() || Index(clusters[partner].members.size()) != mult)
                throw Error(ErrorCode::StructureViolation, "a value of S~S^-1 lacks its partner of equal multiplicity");
            g.part_of_cluster[partner] = part;
            g.zeta.parts.push_back(mult);
            g.zeta.self_paired.push_back(false);
        }
        g.part_of_cluster[c] = part;
        g.zeta.mu.push_back(mu);
    }
    return g;
}

std::vector<Complex> to_list(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void require_geometric_one(const Matrix& j) {
    std::vector<Complex> diag;
    for (Index i = 0; i < j.rows(); ++i) diag.push_back(j(i, i));
    for (const Cluster& c : cluster(diag, 1e-8)) {
        Matrix shifted = j - c.centre * Matrix::Identity(j.rows(), j.cols());
        RealVector sv = singular_values(shifted);
        const double cut = 1e-8 * std::max(1.0, sv(0));
        Index nullity = 0;
        for (Index i = 0; i < sv.size(); ++i)
            if (sv(i) <= cut) ++nullity;
        if (nullity != 1)
            throw Error(ErrorCode::GeomMultViolation,
                        "an eigenvalue of J has geometric multiplicity " + std::to_string(nullity));
    }
}

// Connected components of the joint sparsity pattern of the given matrices.
std::vector<std::vector<Index>> components(const std::vector<const Matrix*>& ms) {
    const Index m = ms.front()->rows();
    DisjointSets sets(m);
    for (const Matrix* a : ms) {
        const double cut = 1e-10 * a->norm();
        for (Index r = 0; r < m; ++r)
            for (Index c = 0; c < m; ++c)
                if (std::abs((*a)(r, c)) > cut) sets.join(r, c);
    }
    std::vector<std::vector<Index>> out;
    std::vector<Index> slot(size_t(m), -1);
    for (Index i = 0; i < m; ++i) {
        Index root = sets.find(i);
        if (slot[size_t(root)] < 0) {
            slot[size_t(root)] = Index(out.size());
            out.emplace_back();
        }
        out[size_t(slot[size_t(root)])].push_back(i);
    }
    return out;
}

}  // namespace

Index ZetaPartition::total() const { return std::accumulate(parts.begin(), parts.end(), Index(0)); }

Index s_space_dimension(const Matrix& x, const Matrix& t, SymmetryClass cls) {
    return s_basis_constrained(x, t, cls).dim();
}

ZetaPartition zeta_partition(const Matrix& s, const Matrix& s_tilde, SymmetryClass cls, double tol) {
    if (s.rows() != s_tilde.rows() || s.cols() != s_tilde.cols() || s.rows() % 2 != 0)
        throw Error(ErrorCode::DimensionMismatch, "S and S~ must share an even order");
    require_nonsingular(s, "S");
    require_nonsingular(s_tilde, "S~");
    const Matrix ratio = linear_solve(s.transpose(), s_tilde.transpose()).transpose();
    return group_clusters(cluster(to_list(dense_eig(ratio).values), tol), cls, tol).zeta;
}

double off_block_mass(const Matrix& m, const std::vector<Index>& sizes) {
    Matrix rest = m;
    Index o = 0;
    for (Index b : sizes) {
        rest.block(o, o, b, b).setZero();
        o += b;
    }
    const double total = m.norm();
    return total > 0 ? rest.norm() / total : 0.0;
}

JointBlockDiagonalization joint_block_diagonalize(const Matrix& x, const Matrix& j, const Matrix& s,
                                                  const Matrix& s_tilde, const Matrix& s_hat,
                                                  SymmetryClass cls, double tol) {
    const Index n = x.rows();
    if (x.cols() != 2 * n || j.rows() != 2 * n || j.cols() != 2 * n || s.rows() != 2 * n || s_hat.rows() != 2 * n)
        throw Error(ErrorCode::DimensionMismatch, "joint_block_diagonalize shapes");
    require_nonsingular(s_hat, "S^");
    require_geometric_one(j);

    JointBlockDiagonalization out;
    out.zeta = zeta_partition(s, s_tilde, cls, tol);
    const Matrix ratio = linear_solve(s.transpose(), s_tilde.transpose()).transpose();

    // Each connected block of (J, S, S̃) carries the values of one part.
    std::vector<std::vector<Index>> cols(out.zeta.parts.size());
    for (const auto& comp : components({&j, &s, &s_tilde})) {
        Matrix sub(Index(comp.size()), Index(comp.size()));
        for (size_t a = 0; a < comp.size(); ++a)
            for (size_t b = 0; b < comp.size(); ++b) sub(Index(a), Index(b)) = ratio(comp[a], comp[b]);
        Index part = -1;
        for (Complex v : to_list(dense_eig(sub).values)) {
            Index hit = -1;
            for (Index p = 0; p < out.zeta.cardinality(); ++p) {
                const Complex mu = out.zeta.mu[size_t(p)];
                if (close(v, mu, tol) || close(v, star(mu, cls.star), tol)) hit = p;
            }
            if (hit < 0 || (part >= 0 && hit != part))
                throw Error(ErrorCode::NotJBDiagonalizable, "a block of J mixes parts of zeta");
            part = hit;
        }
        cols[size_t(part)].insert(cols[size_t(part)].end(), comp.begin(), comp.end());
    }

    out.k = Matrix::Zero(n, n);
    Index o = 0;
    for (size_t p = 0; p < cols.size(); ++p) {
        const Index np = out.zeta.parts[p];
        if (Index(cols[p].size()) != 2 * np)
            throw Error(ErrorCode::NotJBDiagonalizable, "part sizes disagree with the block pattern of J");
        Matrix xp(n, 2 * np);
        for (Index c = 0; c < 2 * np; ++c) xp.col(c) = x.col(cols[p][size_t(c)]);
        Eigen::JacobiSVD<Matrix> svd(xp, Eigen::ComputeThinU);
        out.k.middleCols(o, np) = svd.matrixU().leftCols(np);
        out.pi.insert(out.pi.end(), cols[p].begin(), cols[p].end());
        out.sizes.push_back(np);
        o += np;
    }
    if (o != n || !numerically_nonsingular(out.k, 1e-10))
        throw Error(ErrorCode::NotJBDiagonalizable, "the part subspaces do not span C^n");

    const PalindromicSystem sys = coefficients_from_pair(x, j, s_hat, cls);
    const Matrix ks = star(out.k, cls.star);
    const Matrix a1 = ks * sys.a1() * out.k, a0 = ks * sys.a0() * out.k;
    out.off_block = std::max(off_block_mass(a1, out.sizes), off_block_mass(a0, out.sizes));
    if (out.off_block > 1e-8)
        throw Error(ErrorCode::NotJBDiagonalizable,
                    "off-block mass " + std::to_string(out.off_block) + " exceeds 1e-8");
    o = 0;
    for (Index b : out.sizes) {
        Matrix b1 = a1.block(o, o, b, b), b0 = a0.block(o, o, b, b);
        b0 = 0.5 * (b0 + double(cls.epsilon) * star(b0, cls.star));
        out.blocks.emplace_back(cls, b1, b0, kComputedSymmetryTol);
        o += b;
    }
    return out;
}

}  // namespace palinverse
