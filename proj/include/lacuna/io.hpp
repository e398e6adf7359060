#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lacuna/diagnostics.hpp"
#include "lacuna/integer_set.hpp"
#include "lacuna/relations.hpp"
#include "lacuna/trig_poly.hpp"

namespace lacuna {

// ---------------------------------------------------------------------------
// JSON persistence (newline-free objects, stable field order).
// ---------------------------------------------------------------------------
struct SetRecord {
    std::string name;
    std::string schedule;
    std::uint64_t seed = 0;
    IntegerSet elements;
};

std::string to_json(const SetRecord& r);
SetRecord set_record_from_json(const std::string& text);

std::string to_json(const Relation& r);
Relation relation_from_json(const std::string& text);

std::string to_json(const TrigPolynomial& f);
TrigPolynomial trig_polynomial_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// CSV ledger: bound_id, params_hash, verdict, empirical, analytic, stderr, seed.
// Numbers are printed through one fixed format so reruns are byte-identical.
// ---------------------------------------------------------------------------
struct LedgerEntry {
    std::string bound_id;
    std::string params_hash;
    std::string verdict;
    double empirical = 0;
    double analytic = 0;
    double std_error = 0;
    std::uint64_t seed = 0;
};

std::uint64_t fnv1a_hash(const std::string& s);
std::string format_number(double v);

std::string ledger_header();
std::string ledger_line(const BoundCheckResult& r, std::uint64_t seed);

// Creates the file with a header when absent, then appends one line per result.
void append_ledger(const std::string& path, const std::vector<BoundCheckResult>& results,
                   std::uint64_t seed);

// Malformed rows are skipped and counted, never fatal.
std::vector<LedgerEntry> read_ledger(const std::string& path, std::size_t* skipped = nullptr);

// ---------------------------------------------------------------------------
// Static SVG plots.
// ---------------------------------------------------------------------------
struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
};

std::string render_line_plot(const std::string& title, const std::vector<PlotSeries>& series,
                             int width = 640, int height = 400);

// Paired bars per label (empirical next to analytic).
std::string render_bar_plot(const std::string& title, const std::vector<std::string>& labels,
                            const std::vector<double>& left, const std::vector<double>& right,
                            int width = 640, int height = 400);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace lacuna
