#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bridgerank {

// Lowercases and strips scheme, userinfo, "www.", port, path, query and
// fragment. Returns an empty string when nothing host-like remains.
std::string normalize_domain(std::string_view url_or_host);

// Declared alias pairs (e.g. twitter.com -> x.com). Aliases are matched on
// the normalized host and on any parent domain ("mobile.twitter.com").
class DomainAliases {
public:
    DomainAliases() = default;
    explicit DomainAliases(std::map<std::string, std::string> alias_to_canonical);

    // Loads {"aliases": {"twitter.com": "x.com", ...}} from a JSON file.
    static DomainAliases load_json(const std::string& path);

    std::string canonical(std::string_view normalized_host) const;
    const std::map<std::string, std::string>& table() const noexcept { return table_; }

private:
    std::map<std::string, std::string> table_;
};

// True when host equals domain or is a subdomain of it.
bool domain_matches(std::string_view host, std::string_view domain) noexcept;

// Extracts http(s) URLs from free text and returns their normalized,
// alias-resolved hosts, deduplicated in order of first appearance.
std::vector<std::string> extract_cited_domains(std::string_view text,
                                               const DomainAliases& aliases = {});

}  // namespace bridgerank
