#include "nlheat/io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nlheat {

namespace {

constexpr char kMagic[4] = {'N', 'L', 'H', 'K'};

}  // namespace

void write_field_binary(const std::string& path, const Field& f, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char header[32] = {};
    std::memcpy(header, kMagic, 4);
    const std::uint32_t d = static_cast<std::uint32_t>(f.grid().dim);
    const std::uint32_t n = static_cast<std::uint32_t>(f.grid().nodes_per_axis);
    const double L = f.grid().half_width;
    std::memcpy(header + 4, &d, 4);
    std::memcpy(header + 8, &n, 4);
    std::memcpy(header + 12, &L, 8);
    std::memcpy(header + 20, &time, 8);
    out.write(header, sizeof(header));
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write to " + path);
}

LoadedField read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char header[32];
    in.read(header, sizeof(header));
    if (!in || std::memcmp(header, kMagic, 4) != 0)
        throw std::runtime_error(path + ": not a field file");
    std::uint32_t d, n;
    double L;
    LoadedField lf;
    std::memcpy(&d, header + 4, 4);
    std::memcpy(&n, header + 8, 4);
    std::memcpy(&L, header + 12, 8);
    std::memcpy(&lf.time, header + 20, 8);
    Grid g{static_cast<int>(d), L, static_cast<int>(n)};
    lf.field = Field(g);
    in.read(reinterpret_cast<char*>(lf.field.values().data()),
            static_cast<std::streamsize>(lf.field.size() * sizeof(double)));
    if (!in) throw std::runtime_error(path + ": truncated field data");
    return lf;
}

void write_field_csv(const std::string& path, const Field& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const Grid& g = f.grid();
    for (int a = 0; a < g.dim; ++a) out << "x" << a + 1 << ",";
    out << "value\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec x = g.node(i);
        for (int a = 0; a < g.dim; ++a) out << x[a] << ",";
        out << f[i] << "\n";
    }
}

void write_symbol_csv(const std::string& path, const SymbolField& sf) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const Grid& g = sf.grid;
    for (int a = 0; a < g.dim; ++a) out << "xi" << a + 1 << ",";
    out << "m,achieved_tol\n";
    for (std::size_t i = 0; i < sf.values.size(); ++i) {
        const Vec xi = g.dual_node(i);
        for (int a = 0; a < g.dim; ++a) out << xi[a] << ",";
        out << sf.values[i] << "," << sf.achieved_tol << "\n";
    }
}

LevyKernelSpec spec_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int d = j.at("d").get<int>();
    std::map<std::string, double> params;
    if (j.contains("params"))
        for (const auto& [key, value] : j.at("params").items())
            params[key] = value.get<double>();
    return make_spec(kind, d, params);
}

LevyKernelSpec spec_from_string(const std::string& text, int d) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::map<std::string, double> params;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            const auto comma = rest.find(',', pos);
            const std::string item =
                rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                            : comma - pos);
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("bad kernel parameter: " + item);
            params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return make_spec(kind, d, params);
}

RadonMeasure measure_from_json(const nlohmann::json& j, const Grid& g) {
    RadonMeasure mu;
    mu.name = j.value("name", "measure");
    if (j.contains("atoms")) {
        for (const auto& atom : j.at("atoms")) {
            RadonMeasure::Atom a;
            const auto& xs = atom.at("x");
            for (std::size_t k = 0; k < xs.size() && k < 3; ++k)
                a.location[k] = xs[k].get<double>();
            a.weight = atom.at("w").get<double>();
            mu.atoms.push_back(a);
        }
    }
    if (j.contains("density") && !j.at("density").is_null()) {
        const auto lf = read_field_binary(j.at("density").get<std::string>());
        if (!(lf.field.grid() == g))
            throw std::invalid_argument("measure density grid differs from the solve grid");
        mu.density = lf.field;
    }
    return mu;
}

}  // namespace nlheat
