#include "bridgerank/country.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bridgerank/domain.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/util/tsv.hpp"

namespace bridgerank {

namespace {

// Country with the strictly largest count, or empty on a tie / no counts.
std::string strict_plurality(const std::map<std::string, std::size_t>& counts) {
    std::string best;
    std::size_t best_count = 0;
    bool tied = false;
    for (const auto& [country, n] : counts) {
        if (n > best_count) {
            best = country;
            best_count = n;
            tied = false;
        } else if (n == best_count) {
            tied = true;
        }
    }
    return (best_count == 0 || tied) ? std::string() : best;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

}  // namespace

void CountryRules::validate() const {
    std::map<std::string, std::string> owner;
    for (const auto& [country, rule] : countries) {
        if (rule.languages.empty()) throw ValidationError("country " + country + " declares no language");
        for (const auto& tld : rule.tlds) {
            const auto [it, inserted] = owner.emplace(tld, country);
            if (!inserted) throw ValidationError("TLD ." + tld + " claimed by both " + it->second + " and " + country);
        }
    }
}

CountryRules CountryRules::from_json_text(const std::string& text) {
    CountryRules rules;
    try {
        const auto j = nlohmann::json::parse(text);
        for (const auto& [country, spec] : j.items()) {
            CountryRule rule;
            for (const auto& l : spec.value("languages", std::vector<std::string>{})) rule.languages.insert(lower(l));
            for (auto t : spec.value("tlds", std::vector<std::string>{})) {
                t = lower(t);
                if (!t.empty() && t.front() == '.') t.erase(0, 1);
                rule.tlds.insert(t);
            }
            for (const auto& o : spec.value("outlets", std::vector<std::string>{})) rule.outlets.insert(normalize_domain(o));
            rules.countries.emplace(country, std::move(rule));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid country rules: ") + e.what());
    }
    rules.validate();
    return rules;
}

CountryRules CountryRules::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open rules file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::map<std::string, Attribution> stage1_label_notes(const std::vector<NoteMeta>& notes, const CountryRules& rules) {
    std::map<std::string, Attribution> out;
    for (const auto& note : notes) {
        if (!note.language) continue;
        const auto lang = lower(*note.language);
        std::string match;
        int matches = 0;
        for (const auto& [country, rule] : rules.countries) {
            if (!rule.languages.contains(lang)) continue;
            const bool cites_national = std::any_of(note.cited_domains.begin(), note.cited_domains.end(),
                                                    [&](const std::string& host) {
                for (const auto& outlet : rule.outlets)
                    if (domain_matches(host, outlet)) return true;
                for (const auto& tld : rule.tlds)
                    if (host.size() > tld.size() && host.ends_with(tld) && host[host.size() - tld.size() - 1] == '.')
                        return true;
                return false;
            });
            if (cites_national) {
                match = country;
                ++matches;
            }
        }
        if (matches == 1) out[note.note_id] = {match, 1};
    }
    return out;
}

std::map<std::string, Attribution> stage2_assign_raters(const RatingsDataset& ds,
                                                        const std::map<std::string, Attribution>& note_country,
                                                        std::size_t min_labeled_rated) {
    std::vector<const std::string*> country_of_note(ds.note_count(), nullptr);
    for (std::size_t n = 0; n < ds.note_count(); ++n)
        if (auto it = note_country.find(ds.note_ids()[n]); it != note_country.end())
            country_of_note[n] = &it->second.country;

    std::vector<std::map<std::string, std::size_t>> counts(ds.rater_count());
    std::vector<std::size_t> labeled(ds.rater_count(), 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto* c = country_of_note[ds.note_index()[i]];
        if (!c) continue;
        ++counts[ds.rater_index()[i]][*c];
        ++labeled[ds.rater_index()[i]];
    }
    std::map<std::string, Attribution> out;
    for (std::size_t r = 0; r < ds.rater_count(); ++r) {
        if (labeled[r] < min_labeled_rated) continue;
        if (auto best = strict_plurality(counts[r]); !best.empty()) out[ds.rater_ids()[r]] = {best, 2};
    }
    return out;
}

CountryAssignment stage3_propagate(const RatingsDataset& ds, std::map<std::string, Attribution> note_country,
                                   std::map<std::string, Attribution> rater_country, std::size_t max_iters) {
    // Dense views of the current state; empty string = unassigned.
    std::vector<std::string> note_c(ds.note_count()), rater_c(ds.rater_count());
    for (std::size_t n = 0; n < ds.note_count(); ++n)
        if (auto it = note_country.find(ds.note_ids()[n]); it != note_country.end()) note_c[n] = it->second.country;
    for (std::size_t r = 0; r < ds.rater_count(); ++r)
        if (auto it = rater_country.find(ds.rater_ids()[r]); it != rater_country.end()) rater_c[r] = it->second.country;

    CountryAssignment result;
    result.converged = false;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        bool changed = false;

        std::vector<std::map<std::string, std::size_t>> note_votes(ds.note_count());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto n = ds.note_index()[i];
            const auto& c = rater_c[ds.rater_index()[i]];
            if (note_c[n].empty() && !c.empty()) ++note_votes[n][c];
        }
        for (std::size_t n = 0; n < ds.note_count(); ++n) {
            if (!note_c[n].empty()) continue;
            if (auto best = strict_plurality(note_votes[n]); !best.empty()) {
                note_c[n] = best;
                note_country[ds.note_ids()[n]] = {best, 3};
                changed = true;
            }
        }

        std::vector<std::map<std::string, std::size_t>> rater_votes(ds.rater_count());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto r = ds.rater_index()[i];
            const auto& c = note_c[ds.note_index()[i]];
            if (rater_c[r].empty() && !c.empty()) ++rater_votes[r][c];
        }
        for (std::size_t r = 0; r < ds.rater_count(); ++r) {
            if (!rater_c[r].empty()) continue;
            if (auto best = strict_plurality(rater_votes[r]); !best.empty()) {
                rater_c[r] = best;
                rater_country[ds.rater_ids()[r]] = {best, 3};
                changed = true;
            }
        }

        result.iterations = iter + 1;
        if (!changed) {
            result.converged = true;
            break;
        }
    }
    result.note_country = std::move(note_country);
    result.rater_country = std::move(rater_country);
    return result;
}

CountryAssignment segment_countries(const RatingsDataset& ds, const std::vector<NoteMeta>& notes,
                                    const CountryRules& rules, std::size_t min_labeled_rated, std::size_t max_iters) {
    rules.validate();
    auto note_country = stage1_label_notes(notes, rules);
    auto rater_country = stage2_assign_raters(ds, note_country, min_labeled_rated);
    return stage3_propagate(ds, std::move(note_country), std::move(rater_country), max_iters);
}

void write_assignment_tsv(const std::string& path, const CountryAssignment& a) {
    auto out = util::open_output(path);
    out << "entity_type\tid\tcountry\tstage\n";
    for (const auto& [id, at] : a.note_country) out << "note\t" << id << '\t' << at.country << '\t' << at.stage << '\n';
    for (const auto& [id, at] : a.rater_country) out << "rater\t" << id << '\t' << at.country << '\t' << at.stage << '\n';
}

}  // namespace bridgerank
