#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bridgerank/dataset.hpp"
#include "bridgerank/domain.hpp"
#include "bridgerank/notes.hpp"

namespace bridgerank {

// Column/value mapping from a public dump file onto the canonical schema.
//
// JSON layout:
//   {"kind": "ratings" | "notes",
//    "columns": {"rater_id": "raterParticipantId", ...},
//    "values": {"rating": {"HELPFUL": "HELPFUL", ...}, ...},
//    "urls_from": "summary",           // notes only, optional
//    "skip_unmapped": true}
struct DumpMapping {
    std::string kind;
    std::map<std::string, std::string> columns;  // canonical -> source header
    std::map<std::string, std::map<std::string, std::string>> values;
    std::string urls_from;
    bool skip_unmapped = false;

    static DumpMapping load_json(const std::string& path);
};

struct AdapterStats {
    std::size_t rows_read = 0;
    std::size_t rows_skipped = 0;
};

RatingsDataset adapt_ratings_dump(const std::string& path, const DumpMapping& mapping,
                                  AdapterStats* stats = nullptr);
std::vector<NoteMeta> adapt_notes_dump(const std::string& path, const DumpMapping& mapping,
                                       const DomainAliases& aliases,
                                       AdapterStats* stats = nullptr);

}  // namespace bridgerank
