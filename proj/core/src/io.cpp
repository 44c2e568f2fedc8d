#include "lab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace lab {

std::string format_full(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

void write_measure_csv(const std::filesystem::path& path, const AtomicMeasure& m) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out << "# atomic-measure v1, alpha=" << format_full(m.declared_alpha)
        << ", provenance=" << to_string(m.provenance) << "\n";
    for (const Atom& a : m.atoms)
        out << format_full(a.position.x) << ',' << format_full(a.position.y) << ','
            << format_full(a.weight.real()) << ',' << format_full(a.weight.imag()) << "\n";
    if (!out) throw ConfigError("write failed: " + path.string());
}

namespace {

double parse_double(const std::string& s, const std::filesystem::path& path) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError(path.string() + ": bad numeric field '" + s + "'");
    }
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw ConfigError(path.string() + ": bad numeric field '" + s + "'");
    return v;
}

}  // namespace

AtomicMeasure read_measure_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::string header;
    if (!std::getline(in, header) || header.rfind("# atomic-measure v1,", 0) != 0)
        throw ConfigError(path.string() + ": missing 'atomic-measure v1' header");

    AtomicMeasure m;
    auto field = [&](const std::string& key) {
        auto at = header.find(key + "=");
        if (at == std::string::npos)
            throw ConfigError(path.string() + ": header lacks " + key + "=");
        auto from = at + key.size() + 1;
        auto to = header.find(',', from);
        return header.substr(from, to == std::string::npos ? to : to - from);
    };
    m.declared_alpha = parse_double(field("alpha"), path);
    m.provenance = provenance_from_string(field("provenance"));

    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        double vals[4];
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(row, cell, ','))
                throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                                  ": expected 4 fields");
            vals[i] = parse_double(cell, path);
        }
        if (std::getline(row, cell, ','))
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 4 fields");
        m.atoms.push_back({{vals[0], vals[1]}, {vals[2], vals[3]}});
    }
    if (m.atoms.empty()) throw ConfigError(path.string() + ": no atoms");
    m.support_radius = support_radius(m);
    return m;
}

void write_batch_csv(const std::filesystem::path& path, const std::vector<Frequency>& points,
                     const std::vector<Complex>& values) {
    if (points.size() != values.size())
        throw PreconditionError("write_batch_csv: points/values size mismatch");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out << "xi1,xi2,re,im\n";
    for (std::size_t i = 0; i < points.size(); ++i)
        out << format_full(points[i].x) << ',' << format_full(points[i].y) << ','
            << format_full(values[i].real()) << ',' << format_full(values[i].imag()) << "\n";
    if (!out) throw ConfigError("write failed: " + path.string());
}

nlohmann::json to_json(const CantorSpec& spec) {
    return {{"type", "cantor"},
            {"branches_x", spec.branches_x},
            {"ratio_x", spec.ratio_x},
            {"branches_y", spec.branches_y},
            {"ratio_y", spec.ratio_y},
            {"depth", spec.depth}};
}

CantorSpec cantor_spec_from_json(const nlohmann::json& j) {
    try {
        CantorSpec spec;
        spec.branches_x = j.at("branches_x").get<int>();
        spec.ratio_x = j.at("ratio_x").get<double>();
        spec.branches_y = j.at("branches_y").get<int>();
        spec.ratio_y = j.at("ratio_y").get<double>();
        spec.depth = j.at("depth").get<int>();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("cantor spec: ") + e.what());
    }
}

nlohmann::json to_json(const SharpExampleSpec& spec) {
    return {{"type", "sharp_example"},
            {"p", spec.p},
            {"alpha", spec.alpha},
            {"R", spec.R},
            {"case", spec.case_id == SharpCase::case_i ? "i" : "iii"},
            {"bump_order", spec.bump_order},
            {"samples_per_bump", spec.samples_per_bump}};
}

SharpExampleSpec sharp_spec_from_json(const nlohmann::json& j) {
    try {
        SharpExampleSpec spec;
        spec.p = j.at("p").get<double>();
        spec.alpha = j.at("alpha").get<double>();
        spec.R = j.at("R").get<double>();
        std::string cs = j.at("case").get<std::string>();
        if (cs == "i")
            spec.case_id = SharpCase::case_i;
        else if (cs == "iii")
            spec.case_id = SharpCase::case_iii;
        else
            throw ConfigError("sharp spec: case must be \"i\" or \"iii\"");
        spec.bump_order = j.value("bump_order", 2);
        spec.samples_per_bump = j.value("samples_per_bump", 8);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("sharp spec: ") + e.what());
    }
}

AtomicMeasure build_measure_from_json(const nlohmann::json& j, std::size_t atom_budget) {
    std::string type;
    try {
        type = j.at("type").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("measure spec: ") + e.what());
    }
    if (type == "cantor") return build_cantor_measure(cantor_spec_from_json(j), atom_budget);
    if (type == "sharp_example")
        return build_sharp_example(sharp_spec_from_json(j), atom_budget).measure;
    throw ConfigError("measure spec: unknown type '" + type + "'");
}

}  // namespace lab
