// emit.hpp — machine-readable result tables: CSV and json-lines writers.

#pragma once

#include "phl/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace phl::cli {

struct Table {
    std::vector<std::string> meta;     // comment header lines (may carry timestamps)
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string failed;                // nonempty: append a FAILED sentinel row
};

// CSV: '#'-prefixed metadata, header row, '.' decimals, '\n' endings,
// 17 significant digits. NaN cells render as "nan".
void write_csv(std::ostream& os, const Table& table);

// json-lines: one {"meta": [...]} line, then one flat object per row with the
// same field names; NaN renders as null.
void write_jsonl(std::ostream& os, const Table& table);

void write_table(std::ostream& os, const Table& table, Format format);

// Full-precision rendering used for every emitted number.
std::string format_double(double x);

}  // namespace phl::cli
