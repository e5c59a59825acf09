#include "phl/emit.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace phl::cli {

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_csv(std::ostream& os, const Table& table) {
    for (const auto& m : table.meta) {
        os << "# " << m << "\n";
    }
    for (size_t c = 0; c < table.columns.size(); ++c) {
        os << (c ? "," : "") << table.columns[c];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << format_double(row[c]);
        }
        os << "\n";
    }
    if (!table.failed.empty()) {
        os << "FAILED," << table.failed << "\n";
    }
}

void write_jsonl(std::ostream& os, const Table& table) {
    nlohmann::json meta;
    meta["meta"] = table.meta;
    os << meta.dump() << "\n";
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj;
        for (size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
            if (std::isnan(row[c])) {
                obj[table.columns[c]] = nullptr;
            } else {
                obj[table.columns[c]] = row[c];
            }
        }
        os << obj.dump() << "\n";
    }
    if (!table.failed.empty()) {
        nlohmann::json f;
        f["failed"] = table.failed;
        os << f.dump() << "\n";
    }
}

void write_table(std::ostream& os, const Table& table, Format format) {
    if (format == Format::Csv) {
        write_csv(os, table);
    } else {
        write_jsonl(os, table);
    }
}

}  // namespace phl::cli
