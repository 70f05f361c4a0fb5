#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"

namespace bridgerank {

SourceCategories SourceCategories::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open categories file: " + path);
    SourceCategories out;
    try {
        const auto j = nlohmann::json::parse(in);
        for (const auto& c : j.at("categories")) {
            SourceCategory cat;
            cat.name = c.at("name").get<std::string>();
            for (const auto& d : c.at("domains")) cat.domains.insert(normalize_domain(d.get<std::string>()));
            out.categories.push_back(std::move(cat));
        }
        out.platform_category = j.value("platform_category", std::string{});
        for (const auto& d : j.value("internal_subdomains", std::vector<std::string>{}))
            out.internal_subdomains.insert(normalize_domain(d));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": invalid categories: " + e.what());
    }
    return out;
}

std::vector<SourceRow> source_stats(const std::vector<NoteMeta>& notes, const SourceCategories& cats) {
    const std::size_t k = cats.categories.size();
    std::vector<std::size_t> counts(k, 0);
    std::size_t internal = 0, content = 0;
    std::size_t platform = k;
    for (std::size_t c = 0; c < k; ++c)
        if (cats.categories[c].name == cats.platform_category) platform = c;

    for (const auto& note : notes) {
        std::set<std::size_t> member;
        bool has_internal = false, has_content = false;
        for (const auto& host : note.cited_domains) {
            for (std::size_t c = 0; c < k; ++c) {
                const bool hit = std::any_of(cats.categories[c].domains.begin(), cats.categories[c].domains.end(),
                                             [&](const std::string& d) { return domain_matches(host, d); });
                if (!hit) continue;
                member.insert(c);
                if (c == platform) {
                    const bool is_internal =
                        std::any_of(cats.internal_subdomains.begin(), cats.internal_subdomains.end(),
                                    [&](const std::string& d) { return domain_matches(host, d); });
                    (is_internal ? has_internal : has_content) = true;
                }
                break;
            }
        }
        for (auto c : member) ++counts[c];
        internal += has_internal;
        content += has_content;
    }

    const double total = static_cast<double>(notes.size());
    auto row = [&](std::string name, std::size_t n) {
        return SourceRow{std::move(name), n, total > 0 ? static_cast<double>(n) / total : 0.0};
    };
    std::vector<SourceRow> out;
    for (std::size_t c = 0; c < k; ++c) {
        out.push_back(row(cats.categories[c].name, counts[c]));
        if (c == platform) {
            out.push_back(row(cats.categories[c].name + "/internal", internal));
            out.push_back(row(cats.categories[c].name + "/content", content));
        }
    }
    return out;
}

}  // namespace bridgerank
