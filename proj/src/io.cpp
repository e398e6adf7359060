#include "lacuna/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lacuna/errors.hpp"

namespace lacuna {
namespace {

using json = nlohmann::ordered_json;

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidInput("malformed JSON");
    return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string to_json(const SetRecord& r) {
    json j;
    j["name"] = r.name;
    j["schedule"] = r.schedule;
    j["seed"] = r.seed;
    j["elements"] = r.elements.elements();
    return j.dump();
}

SetRecord set_record_from_json(const std::string& text) {
    json j = parse(text);
    try {
        SetRecord r;
        r.name = j.at("name").get<std::string>();
        r.schedule = j.at("schedule").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.elements = IntegerSet(j.at("elements").get<std::vector<std::int64_t>>());
        return r;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("set record: ") + e.what());
    }
}

std::string to_json(const Relation& r) {
    json j;
    j["support"] = r.support;
    j["signs"] = r.signs;
    return j.dump();
}

Relation relation_from_json(const std::string& text) {
    json j = parse(text);
    Relation r;
    try {
        r.support = j.at("support").get<std::vector<std::int64_t>>();
        r.signs = j.at("signs").get<std::vector<int>>();
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("relation: ") + e.what());
    }
    if (r.support.size() != r.signs.size())
        throw InvalidInput("relation: support/signs length mismatch");
    return r;
}

std::string to_json(const TrigPolynomial& f) {
    json arr = json::array();
    for (const auto& [n, c] : f.coeffs()) arr.push_back({n, c.real(), c.imag()});
    json j;
    j["coeffs"] = std::move(arr);
    return j.dump();
}

TrigPolynomial trig_polynomial_from_json(const std::string& text) {
    json j = parse(text);
    TrigPolynomial f;
    try {
        for (const auto& row : j.at("coeffs")) {
            if (!row.is_array() || row.size() != 3)
                throw InvalidInput("trig polynomial: coefficient rows are [n, re, im]");
            f.set_coeff(row[0].get<std::int64_t>(),
                        {row[1].get<double>(), row[2].get<double>()});
        }
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("trig polynomial: ") + e.what());
    }
    return f;
}

// ---------------------------------------------------------------------------
// CSV ledger
// ---------------------------------------------------------------------------

std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string ledger_header() {
    return "bound_id,params_hash,verdict,empirical,analytic,stderr,seed";
}

std::string ledger_line(const BoundCheckResult& r, std::uint64_t seed) {
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(r.parameters)));
    return r.bound_id + "," + hash + "," + to_string(r.verdict) + "," +
           format_number(r.empirical_estimate) + "," + format_number(r.analytic_bound) + "," +
           format_number(r.std_error) + "," + std::to_string(seed);
}

void append_ledger(const std::string& path, const std::vector<BoundCheckResult>& results,
                   std::uint64_t seed) {
    bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::app);
    if (!out) throw InvalidInput("cannot open ledger: " + path);
    if (fresh) out << ledger_header() << "\n";
    for (const auto& r : results) out << ledger_line(r, seed) << "\n";
}

std::vector<LedgerEntry> read_ledger(const std::string& path, std::size_t* skipped) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open ledger: " + path);
    std::vector<LedgerEntry> out;
    std::size_t bad = 0;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first && line == ledger_header()) {
            first = false;
            continue;
        }
        first = false;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 7) {
            ++bad;
            continue;
        }
        try {
            LedgerEntry e;
            e.bound_id = fields[0];
            e.params_hash = fields[1];
            e.verdict = fields[2];
            e.empirical = std::stod(fields[3]);
            e.analytic = std::stod(fields[4]);
            e.std_error = std::stod(fields[5]);
            e.seed = std::stoull(fields[6]);
            out.push_back(std::move(e));
        } catch (const std::exception&) {
            ++bad;
        }
    }
    if (skipped) *skipped = bad;
    return out;
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

namespace {

constexpr int kMargin = 50;

struct Range {
    double lo = 0, hi = 1;

    double place(double v, double px_lo, double px_hi) const {
        double span = hi - lo;
        if (span <= 0) span = 1;
        return px_lo + (v - lo) / span * (px_hi - px_lo);
    }
};

std::string svg_open(const std::string& title, int width, int height) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << title << "</text>\n";
    return os.str();
}

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    return colors[i % 8];
}

}  // namespace

std::string render_line_plot(const std::string& title, const std::vector<PlotSeries>& series,
                             int width, int height) {
    if (series.empty()) throw InvalidInput("render_line_plot: no series");
    Range xr{1e300, -1e300}, yr{1e300, -1e300};
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw InvalidInput("render_line_plot: x/y length mismatch");
        for (double v : s.x) {
            xr.lo = std::min(xr.lo, v);
            xr.hi = std::max(xr.hi, v);
        }
        for (double v : s.y) {
            yr.lo = std::min(yr.lo, v);
            yr.hi = std::max(yr.hi, v);
        }
    }
    if (xr.lo > xr.hi) xr = {0, 1};
    if (yr.lo > yr.hi) yr = {0, 1};

    std::ostringstream os;
    os << svg_open(title, width, height);
    os << "<line x1=\"" << kMargin << "\" y1=\"" << height - kMargin << "\" x2=\""
       << width - kMargin << "\" y2=\"" << height - kMargin << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
       << "\" y2=\"" << height - kMargin << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kMargin << "\" y=\"" << height - kMargin + 16 << "\" font-size=\"10\">"
       << format_number(xr.lo) << "</text>\n"
       << "<text x=\"" << width - kMargin << "\" y=\"" << height - kMargin + 16
       << "\" text-anchor=\"end\" font-size=\"10\">" << format_number(xr.hi) << "</text>\n"
       << "<text x=\"" << kMargin - 4 << "\" y=\"" << height - kMargin
       << "\" text-anchor=\"end\" font-size=\"10\">" << format_number(yr.lo) << "</text>\n"
       << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin
       << "\" text-anchor=\"end\" font-size=\"10\">" << format_number(yr.hi) << "</text>\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (s.x.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << palette(si) << "\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double px = xr.place(s.x[i], kMargin, width - kMargin);
            double py = yr.place(s.y[i], height - kMargin, kMargin);
            os << format_number(px) << "," << format_number(py) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - kMargin + 4 << "\" y=\"" << 40 + 14 * si
           << "\" font-size=\"10\" fill=\"" << palette(si) << "\" text-anchor=\"end\">" << s.label
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string render_bar_plot(const std::string& title, const std::vector<std::string>& labels,
                            const std::vector<double>& left, const std::vector<double>& right,
                            int width, int height) {
    if (labels.empty() || labels.size() != left.size() || labels.size() != right.size())
        throw InvalidInput("render_bar_plot: label/value length mismatch");
    double top = 0;
    for (double v : left) top = std::max(top, v);
    for (double v : right) top = std::max(top, v);
    if (top <= 0) top = 1;

    std::ostringstream os;
    os << svg_open(title, width, height);
    double slot = static_cast<double>(width - 2 * kMargin) / static_cast<double>(labels.size());
    double bar = slot * 0.35;
    double floor_y = height - kMargin;
    double span_y = static_cast<double>(height - 2 * kMargin);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        double x0 = kMargin + slot * static_cast<double>(i);
        double hl = left[i] / top * span_y;
        double hr = right[i] / top * span_y;
        os << "<rect x=\"" << format_number(x0 + slot * 0.1) << "\" y=\""
           << format_number(floor_y - hl) << "\" width=\"" << format_number(bar) << "\" height=\""
           << format_number(hl) << "\" fill=\"" << palette(0) << "\"/>\n";
        os << "<rect x=\"" << format_number(x0 + slot * 0.55) << "\" y=\""
           << format_number(floor_y - hr) << "\" width=\"" << format_number(bar) << "\" height=\""
           << format_number(hr) << "\" fill=\"" << palette(1) << "\"/>\n";
        os << "<text x=\"" << format_number(x0 + slot / 2) << "\" y=\""
           << height - kMargin + 16 << "\" text-anchor=\"middle\" font-size=\"9\">" << labels[i]
           << "</text>\n";
    }
    os << "<line x1=\"" << kMargin << "\" y1=\"" << floor_y << "\" x2=\"" << width - kMargin
       << "\" y2=\"" << floor_y << "\" stroke=\"black\"/>\n";
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace lacuna
