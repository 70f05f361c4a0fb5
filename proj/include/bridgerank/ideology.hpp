#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bridgerank {

// Users x MPs follow relation.
struct BipartiteFollowGraph {
    std::vector<std::string> users;
    std::vector<std::string> mps;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // (user, mp), sorted, unique
    std::vector<std::string> mp_party;             // empty or one per MP
    std::vector<std::int64_t> user_followers;      // empty or one per user

    // Sorts and deduplicates edges; throws ValidationError on duplicate ids,
    // out-of-range endpoints, or mis-sized attribute vectors.
    void normalize();
    std::vector<std::size_t> user_degrees() const;
    std::vector<std::size_t> mp_degrees() const;
};

// Keeps users following >= min_mps_followed MPs with >= min_followers_of_user
// followers. MPs are never dropped. Throws if follower counts are missing.
BipartiteFollowGraph filter_graph(const BipartiteFollowGraph& g, std::size_t min_mps_followed = 3,
                                  std::int64_t min_followers_of_user = 25);

enum class CaCoordinates { Standard, Principal };

struct IdeologyEmbedding {
    std::vector<std::string> users;    // rows actually embedded
    std::vector<std::string> mps;
    Eigen::MatrixXd user_coords;       // users x d
    Eigen::MatrixXd mp_coords;         // mps x d
    Eigen::VectorXd singular_values;   // d, nonincreasing
    std::size_t dims = 0;
    CaCoordinates coordinates = CaCoordinates::Standard;
    std::vector<std::string> dropped_users;  // zero margin
    std::vector<std::string> dropped_mps;
};

// Correspondence analysis of the adjacency matrix. The trivial dimension is
// excluded; column k is the (k+1)-th principal axis. Zero-margin rows and
// columns are dropped and listed in the result. Throws ValidationError if
// dims exceeds the achievable rank (the message states it).
IdeologyEmbedding correspondence_analysis(const BipartiteFollowGraph& g, std::size_t dims,
                                          CaCoordinates coords = CaCoordinates::Standard);

struct PartyScore {
    double left_right = 0.0;
    double anti_elite = 0.0;
};

struct AffineFit {
    double intercept = 0.0;
    Eigen::VectorXd weights;           // one per embedding dimension
    std::map<std::string, double> residuals;  // per party

    double apply(const Eigen::Ref<const Eigen::VectorXd>& x) const { return intercept + weights.dot(x); }
};

struct SurveyCalibration {
    std::map<std::string, PartyScore> party_scores;
    std::map<std::string, Eigen::VectorXd> party_means;  // mean MP coordinates
    AffineFit left_right;
    AffineFit anti_elite;
};

// Least-squares affine maps from party-mean MP coordinates to each survey
// dimension. Parties without scores are ignored; scored parties without MPs
// raise ValidationError, as does a rank-deficient design.
SurveyCalibration calibrate(const IdeologyEmbedding& emb, const std::vector<std::string>& mp_party,
                            const std::map<std::string, PartyScore>& party_scores);

// mp_party aligned with emb.mps, looked up from the full graph.
std::vector<std::string> party_of_embedded_mps(const IdeologyEmbedding& emb,
                                               const BipartiteFollowGraph& g);

std::vector<PartyScore> project_users(const SurveyCalibration& cal, const IdeologyEmbedding& emb);

// File formats: edges "user_id mp_id", mps "mp_id party", users
// "user_id follower_count", party scores "party left_right anti_elite".
BipartiteFollowGraph load_follow_graph(const std::string& edges_path, const std::string& mps_path,
                                       const std::string& users_path);
void write_follow_graph(const std::string& dir, const BipartiteFollowGraph& g);
std::map<std::string, PartyScore> load_party_scores(const std::string& path);
void write_party_scores(const std::string& path, const std::map<std::string, PartyScore>& scores);

}  // namespace bridgerank
