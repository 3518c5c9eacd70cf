#include "report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "expanse/error.hpp"

namespace expanse::cli {

using nlohmann::json;

Format format_from_string(const std::string& name) {
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    if (name == "text") return Format::text;
    throw InvalidInput("expected json, csv or text", "format");
}

json real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    if (v == 0.0) return "0";  // folds -0
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
    if (ec != std::errc{}) throw InternalError("number formatting failed");
    std::string s(buf.data(), end);
    // to_chars keeps trailing zeros in the mantissa for fixed precision.
    const auto epos = s.find('e');
    std::string mant = s.substr(0, epos);
    const std::string exp = epos == std::string::npos ? "" : s.substr(epos);
    if (mant.find('.') != std::string::npos) {
        while (mant.back() == '0') mant.pop_back();
        if (mant.back() == '.') mant.pop_back();
    }
    return mant + exp;
}

namespace {

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_real(v.get<double>());
    if (v.is_null()) return "null";
    return v.dump();
}

void write_json(const json& v, std::ostream& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    if (v.is_object()) {
        if (v.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {  // std::map order: sorted keys
            if (!first) out << ",\n";
            first = false;
            out << inner << json(it.key()).dump() << ": ";
            write_json(it.value(), out, indent + 1);
        }
        out << "\n" << pad << "}";
    } else if (v.is_array()) {
        if (v.empty()) {
            out << "[]";
            return;
        }
        const bool flat = std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
        if (flat) {
            out << "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out << ", ";
                write_json(v[i], out, indent + 1);
            }
            out << "]";
            return;
        }
        out << "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << ",\n";
            out << inner;
            write_json(v[i], out, indent + 1);
        }
        out << "\n" << pad << "]";
    } else if (v.is_number_float()) {
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw InternalError("non-finite number reached the JSON writer");
        out << format_real(d);
    } else {
        out << v.dump();
    }
}

void write_csv(const json& doc, std::ostream& out) {
    out << "n,gamma,rate\n";
    if (!doc.contains("primary")) return;
    const auto& rows = doc.at("sequences").at(doc.at("primary").get<std::string>()).at("rows");
    for (const auto& r : rows) {
        out << r.at("n").get<int>() << "," << scalar_text(r.at("gamma")) << ",";
        if (!r.at("rate").is_null()) out << scalar_text(r.at("rate"));
        out << "\n";
    }
}

// Columns padded to their widest cell. Numeric tables right-align every
// column but the first; key/value tables align left.
void write_table(const std::vector<std::vector<std::string>>& rows, std::ostream& out, bool numeric = true) {
    if (rows.empty()) return;
    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) {
            if (c) line += "  ";
            const auto gap = std::string(width[c] - r[c].size(), ' ');
            line += (c == 0 || !numeric) ? r[c] + gap : gap + r[c];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
    }
}

void write_scalars(const json& obj, const std::string& prefix, std::vector<std::vector<std::string>>& rows) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const auto key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            write_scalars(*it, key, rows);
        } else if (it->is_primitive()) {
            rows.push_back({key, scalar_text(*it)});
        } else if (std::all_of(it->begin(), it->end(), [](const json& e) { return e.is_primitive(); })) {
            std::string joined;
            for (const auto& e : *it) joined += (joined.empty() ? "" : ",") + scalar_text(e);
            rows.push_back({key, "[" + joined + "]"});
        }
    }
}

void write_text(const json& doc, std::ostream& out) {
    const auto& m = doc.at("manifest");
    out << m.at("tool").get<std::string>() << "  " << doc.value("command", "") << "\n";
    std::vector<std::vector<std::string>> head{{"spec sha256", m.at("spec_sha256").get<std::string>()},
                                               {"command", m.at("command").get<std::string>()}};
    if (!m.at("timestamp").get<std::string>().empty()) head.push_back({"timestamp", m.at("timestamp").get<std::string>()});
    write_table(head, out, false);

    if (doc.contains("summary")) {
        out << "\nsummary\n";
        std::vector<std::vector<std::string>> rows;
        write_scalars(doc.at("summary"), "", rows);
        write_table(rows, out, false);
    }
    if (doc.contains("sequences")) {
        for (const auto& [name, seq] : doc.at("sequences").items()) {
            out << "\nsequence " << name << " (" << seq.at("kind").get<std::string>() << ": "
                << seq.at("source").get<std::string>() << ")\n";
            std::vector<std::vector<std::string>> rows{{"n", "gamma", "rate"}};
            for (const auto& r : seq.at("rows")) {
                rows.push_back({std::to_string(r.at("n").get<int>()), scalar_text(r.at("gamma")),
                                r.at("rate").is_null() ? "-" : scalar_text(r.at("rate"))});
            }
            write_table(rows, out);
            if (seq.contains("estimate")) {
                std::vector<std::vector<std::string>> est;
                write_scalars(seq.at("estimate"), "", est);
                write_table(est, out, false);
            }
        }
    }
    if (doc.contains("checks")) {
        out << "\nchecks\n";
        std::vector<std::vector<std::string>> rows{{"name", "status", "left", "right", "slack"}};
        for (const auto& c : doc.at("checks")) {
            rows.push_back({c.at("name").get<std::string>(), c.at("status").get<std::string>(),
                            scalar_text(c.at("left")), scalar_text(c.at("right")), scalar_text(c.at("slack"))});
        }
        write_table(rows, out);
        for (const auto& c : doc.at("checks")) {
            out << "  " << c.at("name").get<std::string>() << ": " << c.at("inequality").get<std::string>() << "\n";
            for (const auto& cav : c.at("caveats")) out << "    - " << cav.get<std::string>() << "\n";
        }
    }
    if (doc.contains("status")) out << "\nstatus " << doc.at("status").get<std::string>() << "\n";
}

}  // namespace

void write_report(const json& doc, Format format, std::ostream& out) {
    switch (format) {
        case Format::json:
            write_json(doc, out, 0);
            out << "\n";
            break;
        case Format::csv:
            write_csv(doc, out);
            break;
        case Format::text:
            write_text(doc, out);
            break;
    }
    if (!out) throw Error("write failed");
}

}  // namespace expanse::cli
