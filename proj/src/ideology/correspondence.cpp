#include <cmath>

#include <Eigen/Sparse>

#include "bridgerank/error.hpp"
#include "bridgerank/ideology.hpp"

namespace bridgerank {

namespace {

// Eigenvalues of the CA Gram matrix at or below this are treated as zero.
constexpr double kRankTolerance = 1e-12;

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

}  // namespace

IdeologyEmbedding correspondence_analysis(const BipartiteFollowGraph& g, std::size_t dims, CaCoordinates coords) {
    if (dims == 0) throw ValidationError("correspondence analysis needs dims >= 1");
    const auto user_deg = g.user_degrees();
    const auto mp_deg = g.mp_degrees();

    IdeologyEmbedding emb;
    emb.dims = dims;
    emb.coordinates = coords;
    std::vector<std::int64_t> row_of(g.users.size(), -1), col_of(g.mps.size(), -1);
    for (std::size_t u = 0; u < g.users.size(); ++u) {
        if (user_deg[u] == 0) {
            emb.dropped_users.push_back(g.users[u]);
            continue;
        }
        row_of[u] = static_cast<std::int64_t>(emb.users.size());
        emb.users.push_back(g.users[u]);
    }
    for (std::size_t m = 0; m < g.mps.size(); ++m) {
        if (mp_deg[m] == 0) {
            emb.dropped_mps.push_back(g.mps[m]);
            continue;
        }
        col_of[m] = static_cast<std::int64_t>(emb.mps.size());
        emb.mps.push_back(g.mps[m]);
    }
    const auto rows = static_cast<Eigen::Index>(emb.users.size());
    const auto cols = static_cast<Eigen::Index>(emb.mps.size());
    const double total = static_cast<double>(g.edges.size());
    if (rows < 2 || cols < 2)
        throw ValidationError("correspondence analysis needs at least 2 non-isolated users and MPs; achievable rank is 0");

    Eigen::VectorXd r(rows), c(cols);
    for (std::size_t u = 0; u < g.users.size(); ++u)
        if (row_of[u] >= 0) r[row_of[u]] = static_cast<double>(user_deg[u]) / total;
    for (std::size_t m = 0; m < g.mps.size(); ++m)
        if (col_of[m] >= 0) c[col_of[m]] = static_cast<double>(mp_deg[m]) / total;
    const Eigen::VectorXd sqrt_r = r.cwiseSqrt(), sqrt_c = c.cwiseSqrt();

    // Q = D_r^{-1/2} P D_c^{-1/2}; the standardized residual is
    // S = Q - sqrt(r) sqrt(c)^T, and S^T S = Q^T Q - sqrt(c) sqrt(c)^T.
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(g.edges.size());
    for (const auto& [u, m] : g.edges) {
        const auto i = row_of[u], j = col_of[m];
        entries.emplace_back(i, j, (1.0 / total) / (sqrt_r[i] * sqrt_c[j]));
    }
    SparseRows q(rows, cols);
    q.setFromTriplets(entries.begin(), entries.end());

    const bool by_columns = cols <= rows;
    Eigen::MatrixXd gram;
    if (by_columns) {
        gram = Eigen::MatrixXd(SparseRows(q.transpose() * q));
        gram.noalias() -= sqrt_c * sqrt_c.transpose();
    } else {
        gram = Eigen::MatrixXd(SparseRows(q * q.transpose()));
        gram.noalias() -= sqrt_r * sqrt_r.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) throw Error("eigendecomposition of the CA Gram matrix failed");

    // Eigen returns ascending eigenvalues.
    const Eigen::Index n_eig = eig.eigenvalues().size();
    std::size_t rank = 0;
    for (Eigen::Index k = n_eig - 1; k >= 0 && eig.eigenvalues()[k] > kRankTolerance; --k) ++rank;
    if (dims > rank)
        throw ValidationError("requested " + std::to_string(dims) + " CA dimensions but the achievable rank is " +
                              std::to_string(rank));

    const auto d = static_cast<Eigen::Index>(dims);
    emb.singular_values.resize(d);
    Eigen::MatrixXd left(rows, d), right(cols, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double lambda = eig.eigenvalues()[n_eig - 1 - k];
        const double sigma = std::sqrt(lambda);
        emb.singular_values[k] = sigma;
        const Eigen::VectorXd vec = eig.eigenvectors().col(n_eig - 1 - k);
        if (by_columns) {
            right.col(k) = vec;
            left.col(k) = (q * vec - sqrt_r * sqrt_c.dot(vec)) / sigma;
        } else {
            left.col(k) = vec;
            right.col(k) = (q.transpose() * vec - sqrt_c * sqrt_r.dot(vec)) / sigma;
        }
        // Fix the arbitrary sign: the MP with the largest |coordinate| is positive.
        Eigen::Index arg = 0;
        right.col(k).cwiseAbs().maxCoeff(&arg);
        if (right(arg, k) < 0) {
            right.col(k) *= -1.0;
            left.col(k) *= -1.0;
        }
    }

    emb.user_coords = r.cwiseSqrt().cwiseInverse().asDiagonal() * left;
    emb.mp_coords = c.cwiseSqrt().cwiseInverse().asDiagonal() * right;
    if (coords == CaCoordinates::Principal) {
        emb.user_coords = emb.user_coords * emb.singular_values.asDiagonal();
        emb.mp_coords = emb.mp_coords * emb.singular_values.asDiagonal();
    }
    return emb;
}

}  // namespace bridgerank
