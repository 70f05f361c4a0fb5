#include <algorithm>
#include <filesystem>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "bridgerank/error.hpp"
#include "bridgerank/ideology.hpp"
#include "bridgerank/util/tsv.hpp"

namespace bridgerank {

namespace {

void check_unique(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second) throw ValidationError(std::string("duplicate ") + what + " id " + id);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + path);
    return in;
}

}  // namespace

void BipartiteFollowGraph::normalize() {
    check_unique(users, "user");
    check_unique(mps, "MP");
    if (!mp_party.empty() && mp_party.size() != mps.size()) throw ValidationError("mp_party must have one entry per MP");
    if (!user_followers.empty() && user_followers.size() != users.size())
        throw ValidationError("user_followers must have one entry per user");
    for (const auto& [u, m] : edges)
        if (u >= users.size() || m >= mps.size()) throw ValidationError("edge endpoint out of range");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

std::vector<std::size_t> BipartiteFollowGraph::user_degrees() const {
    std::vector<std::size_t> deg(users.size(), 0);
    for (const auto& e : edges) ++deg[e.first];
    return deg;
}

std::vector<std::size_t> BipartiteFollowGraph::mp_degrees() const {
    std::vector<std::size_t> deg(mps.size(), 0);
    for (const auto& e : edges) ++deg[e.second];
    return deg;
}

BipartiteFollowGraph filter_graph(const BipartiteFollowGraph& g, std::size_t min_mps_followed,
                                  std::int64_t min_followers_of_user) {
    if (g.users.empty()) return g;
    if (g.user_followers.size() != g.users.size())
        throw ValidationError("filter_graph needs a follower count for every user");
    const auto deg = g.user_degrees();
    BipartiteFollowGraph out;
    out.mps = g.mps;
    out.mp_party = g.mp_party;
    std::vector<std::int64_t> remap(g.users.size(), -1);
    for (std::size_t u = 0; u < g.users.size(); ++u) {
        if (deg[u] < min_mps_followed || g.user_followers[u] < min_followers_of_user) continue;
        remap[u] = static_cast<std::int64_t>(out.users.size());
        out.users.push_back(g.users[u]);
        out.user_followers.push_back(g.user_followers[u]);
    }
    for (const auto& [u, m] : g.edges)
        if (remap[u] >= 0) out.edges.emplace_back(static_cast<std::uint32_t>(remap[u]), m);
    return out;
}

BipartiteFollowGraph load_follow_graph(const std::string& edges_path, const std::string& mps_path,
                                       const std::string& users_path) {
    BipartiteFollowGraph g;
    std::unordered_map<std::string, std::uint32_t> mp_index, user_index;
    std::vector<std::string_view> f;
    {
        auto in = open_input(mps_path);
        util::TsvReader r(in, mps_path);
        r.expect_header({"mp_id", "party"});
        while (r.next(f)) {
            if (f.size() != 2) r.fail("expected 2 fields");
            if (!mp_index.emplace(std::string(f[0]), static_cast<std::uint32_t>(g.mps.size())).second)
                r.fail("duplicate mp_id " + std::string(f[0]));
            g.mps.emplace_back(f[0]);
            g.mp_party.emplace_back(f[1]);
        }
    }
    if (!users_path.empty()) {
        auto in = open_input(users_path);
        util::TsvReader r(in, users_path);
        r.expect_header({"user_id", "follower_count"});
        while (r.next(f)) {
            if (f.size() != 2) r.fail("expected 2 fields");
            if (!user_index.emplace(std::string(f[0]), static_cast<std::uint32_t>(g.users.size())).second)
                r.fail("duplicate user_id " + std::string(f[0]));
            g.users.emplace_back(f[0]);
            try {
                g.user_followers.push_back(util::parse_int(f[1]));
            } catch (const Error& e) {
                r.fail(e.what());
            }
        }
    }
    auto in = open_input(edges_path);
    util::TsvReader r(in, edges_path);
    r.expect_header({"user_id", "mp_id"});
    while (r.next(f)) {
        if (f.size() != 2) r.fail("expected 2 fields");
        const auto mp = mp_index.find(std::string(f[1]));
        if (mp == mp_index.end()) r.fail("unknown mp_id " + std::string(f[1]));
        auto user = user_index.find(std::string(f[0]));
        if (user == user_index.end()) {
            if (!users_path.empty()) r.fail("user_id " + std::string(f[0]) + " missing from " + users_path);
            user = user_index.emplace(std::string(f[0]), static_cast<std::uint32_t>(g.users.size())).first;
            g.users.emplace_back(f[0]);
        }
        g.edges.emplace_back(user->second, mp->second);
    }
    g.normalize();
    return g;
}

void write_follow_graph(const std::string& dir, const BipartiteFollowGraph& g) {
    std::filesystem::create_directories(dir);
    {
        auto out = util::open_output(dir + "/edges.tsv");
        out << "user_id\tmp_id\n";
        for (const auto& [u, m] : g.edges) out << g.users[u] << '\t' << g.mps[m] << '\n';
    }
    {
        auto out = util::open_output(dir + "/mps.tsv");
        out << "mp_id\tparty\n";
        for (std::size_t j = 0; j < g.mps.size(); ++j)
            out << g.mps[j] << '\t' << (g.mp_party.empty() ? std::string() : g.mp_party[j]) << '\n';
    }
    auto out = util::open_output(dir + "/users.tsv");
    out << "user_id\tfollower_count\n";
    for (std::size_t i = 0; i < g.users.size(); ++i)
        out << g.users[i] << '\t' << (g.user_followers.empty() ? 0 : g.user_followers[i]) << '\n';
}

std::map<std::string, PartyScore> load_party_scores(const std::string& path) {
    auto in = open_input(path);
    util::TsvReader r(in, path);
    r.expect_header({"party", "left_right", "anti_elite"});
    std::map<std::string, PartyScore> scores;
    std::vector<std::string_view> f;
    while (r.next(f)) {
        if (f.size() != 3) r.fail("expected 3 fields");
        try {
            if (!scores.emplace(std::string(f[0]), PartyScore{util::parse_double(f[1]), util::parse_double(f[2])})
                     .second)
                r.fail("duplicate party " + std::string(f[0]));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            r.fail(e.what());
        }
    }
    return scores;
}

void write_party_scores(const std::string& path, const std::map<std::string, PartyScore>& scores) {
    auto out = util::open_output(path);
    out << "party\tleft_right\tanti_elite\n";
    for (const auto& [party, s] : scores)
        out << party << '\t' << util::format_double(s.left_right) << '\t' << util::format_double(s.anti_elite) << '\n';
}

}  // namespace bridgerank
