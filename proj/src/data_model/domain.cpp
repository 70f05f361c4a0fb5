#include "bridgerank/domain.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "bridgerank/error.hpp"

namespace bridgerank {

std::string normalize_domain(std::string_view input) {
    std::string s;
    s.reserve(input.size());
    for (char c : input) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    s = s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);

    if (const auto scheme = s.find("://"); scheme != std::string::npos) s.erase(0, scheme + 3);
    if (const auto end = s.find_first_of("/?#"); end != std::string::npos) s.erase(end);
    if (const auto at = s.rfind('@'); at != std::string::npos) s.erase(0, at + 1);
    if (const auto colon = s.find(':'); colon != std::string::npos) s.erase(colon);
    while (!s.empty() && s.back() == '.') s.pop_back();
    if (s.rfind("www.", 0) == 0) s.erase(0, 4);
    return s;
}

bool domain_matches(std::string_view host, std::string_view domain) noexcept {
    if (domain.empty() || host.size() < domain.size()) return false;
    if (host == domain) return true;
    return host.size() > domain.size() && host.ends_with(domain) &&
           host[host.size() - domain.size() - 1] == '.';
}

DomainAliases::DomainAliases(std::map<std::string, std::string> alias_to_canonical) {
    for (auto& [alias, canon] : alias_to_canonical) table_[normalize_domain(alias)] = normalize_domain(canon);
}

DomainAliases DomainAliases::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open alias file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": invalid JSON: " + e.what());
    }
    std::map<std::string, std::string> table;
    for (auto& [k, v] : j.at("aliases").items()) table[k] = v.get<std::string>();
    return DomainAliases(std::move(table));
}

std::string DomainAliases::canonical(std::string_view host) const {
    std::string_view cur = host;
    while (true) {
        if (auto it = table_.find(std::string(cur)); it != table_.end()) return it->second;
        const auto dot = cur.find('.');
        if (dot == std::string_view::npos) break;
        cur.remove_prefix(dot + 1);
    }
    return std::string(host);
}

std::vector<std::string> extract_cited_domains(std::string_view text, const DomainAliases& aliases) {
    static const std::regex url_re(R"(https?://[^\s<>"'\)\]\|]+)", std::regex::icase);
    std::vector<std::string> out;
    const std::string str(text);
    for (auto it = std::sregex_iterator(str.begin(), str.end(), url_re); it != std::sregex_iterator(); ++it) {
        auto host = aliases.canonical(normalize_domain(it->str()));
        if (host.empty()) continue;
        if (std::find(out.begin(), out.end(), host) == out.end()) out.push_back(std::move(host));
    }
    return out;
}

}  // namespace bridgerank
