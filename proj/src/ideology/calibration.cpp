#include <Eigen/QR>

#include "bridgerank/error.hpp"
#include "bridgerank/ideology.hpp"

namespace bridgerank {

std::vector<std::string> party_of_embedded_mps(const IdeologyEmbedding& emb, const BipartiteFollowGraph& g) {
    if (g.mp_party.size() != g.mps.size()) throw ValidationError("graph carries no MP party table");
    std::map<std::string, std::string> party;
    for (std::size_t j = 0; j < g.mps.size(); ++j) party[g.mps[j]] = g.mp_party[j];
    std::vector<std::string> out;
    out.reserve(emb.mps.size());
    for (const auto& mp : emb.mps) out.push_back(party.at(mp));
    return out;
}

SurveyCalibration calibrate(const IdeologyEmbedding& emb, const std::vector<std::string>& mp_party,
                            const std::map<std::string, PartyScore>& party_scores) {
    if (mp_party.size() != emb.mps.size()) throw ValidationError("mp_party must align with the embedded MPs");
    const auto d = emb.mp_coords.cols();

    SurveyCalibration cal;
    cal.party_scores = party_scores;
    std::map<std::string, std::size_t> members;
    for (std::size_t j = 0; j < mp_party.size(); ++j) {
        if (!party_scores.contains(mp_party[j])) continue;
        auto [it, inserted] = cal.party_means.try_emplace(mp_party[j], Eigen::VectorXd::Zero(d));
        it->second += emb.mp_coords.row(static_cast<Eigen::Index>(j)).transpose();
        ++members[mp_party[j]];
    }
    for (const auto& [party, score] : party_scores)
        if (!members.contains(party)) throw ValidationError("scored party " + party + " has no MP in the embedding");
    for (auto& [party, mean] : cal.party_means) mean /= static_cast<double>(members[party]);

    const auto p = static_cast<Eigen::Index>(cal.party_means.size());
    Eigen::MatrixXd design(p, d + 1);
    Eigen::VectorXd lr(p), ae(p);
    Eigen::Index row = 0;
    for (const auto& [party, mean] : cal.party_means) {
        design(row, 0) = 1.0;
        design.row(row).tail(d) = mean.transpose();
        lr[row] = party_scores.at(party).left_right;
        ae[row] = party_scores.at(party).anti_elite;
        ++row;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < d + 1)
        throw ValidationError("degenerate calibration design: " + std::to_string(p) + " party means span rank " +
                              std::to_string(qr.rank()) + " but an affine fit in " + std::to_string(d) +
                              " dimensions needs rank " + std::to_string(d + 1));

    auto fit = [&](const Eigen::VectorXd& y) {
        const Eigen::VectorXd beta = qr.solve(y);
        AffineFit f;
        f.intercept = beta[0];
        f.weights = beta.tail(d);
        const Eigen::VectorXd resid = y - design * beta;
        Eigen::Index k = 0;
        for (const auto& [party, mean] : cal.party_means) f.residuals[party] = resid[k++];
        return f;
    };
    cal.left_right = fit(lr);
    cal.anti_elite = fit(ae);
    return cal;
}

std::vector<PartyScore> project_users(const SurveyCalibration& cal, const IdeologyEmbedding& emb) {
    if (cal.left_right.weights.size() != emb.user_coords.cols())
        throw ValidationError("calibration and embedding dimensions differ");
    std::vector<PartyScore> out(static_cast<std::size_t>(emb.user_coords.rows()));
    for (Eigen::Index i = 0; i < emb.user_coords.rows(); ++i) {
        const Eigen::VectorXd x = emb.user_coords.row(i).transpose();
        out[static_cast<std::size_t>(i)] = {cal.left_right.apply(x), cal.anti_elite.apply(x)};
    }
    return out;
}

}  // namespace bridgerank
