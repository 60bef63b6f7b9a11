#include "distgeo/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "distgeo/toml.hpp"

namespace distgeo {

SampleSpec ScenarioModel::sample_spec(int count) const {
    if (!box) throw InputError("scenario declares no sampling box");
    SampleSpec spec;
    spec.box = *box;
    spec.seed = seed;
    spec.count = count;
    return spec;
}

namespace {

void check_known_keys(const TomlTable& table, const std::set<std::string>& known,
                      const std::string& where) {
    for (const auto& [key, value] : table.entries)
        if (!known.count(key))
            throw InputError("unknown key '" + key + "' in " + where + " (line " +
                             std::to_string(value.line) + ")");
}

std::vector<std::string> string_list(const TomlValue& v, const std::string& what) {
    std::vector<std::string> out;
    for (const auto& item : v.as_array(what)) out.push_back(item.as_string(what + " entry"));
    return out;
}

std::vector<std::vector<std::string>> string_grid(const TomlValue& v, const std::string& what) {
    std::vector<std::vector<std::string>> out;
    for (const auto& row : v.as_array(what)) out.push_back(string_list(row, what + " row"));
    return out;
}

}  // namespace

ScenarioModel load_scenario_text(const std::string& text) {
    TomlDocument doc = toml_parse(text);

    check_known_keys(doc.root, {"spec_version"}, "scenario root");
    const TomlValue* version = doc.root.find("spec_version");
    if (!version) throw InputError("scenario is missing required key spec_version");
    if (version->as_int("spec_version") != 1)
        throw InputError("unsupported spec_version " +
                         std::to_string(version->as_int("spec_version")));

    for (const auto& name : doc.section_order)
        if (name != "manifold" && name != "distribution" && name != "force" &&
            name != "sampling" && name != "tolerances")
            throw InputError("unknown section [" + name + "]");

    const TomlTable* manifold = doc.section("manifold");
    if (!manifold) throw InputError("scenario is missing [manifold]");
    check_known_keys(*manifold, {"coords", "metric"}, "[manifold]");
    const TomlValue* coords = manifold->find("coords");
    const TomlValue* metric = manifold->find("metric");
    if (!coords || !metric) throw InputError("[manifold] needs coords and metric");

    ScenarioModel s;
    std::vector<std::string> chart = string_list(*coords, "coords");
    try {
        s.manifold = ManifoldModel::make(chart, string_grid(*metric, "metric"));
    } catch (const ParseError& e) {
        throw InputError(std::string("metric expression error: ") + e.what());
    }
    const int m = s.manifold.dim();

    if (const TomlTable* dist = doc.section("distribution")) {
        check_known_keys(*dist, {"generators"}, "[distribution]");
        const TomlValue* gens = dist->find("generators");
        if (!gens) throw InputError("[distribution] needs generators");
        try {
            s.distribution = DistributionModel::make(s.manifold, string_grid(*gens, "generators"));
        } catch (const ParseError& e) {
            throw InputError(std::string("generator expression error: ") + e.what());
        }
    }

    if (const TomlTable* force = doc.section("force")) {
        check_known_keys(*force, {"components"}, "[force]");
        const TomlValue* comps = force->find("components");
        if (!comps) throw InputError("[force] needs components");
        try {
            s.force = VectorFieldModel::parse(string_list(*comps, "components"), s.manifold.chart);
        } catch (const ParseError& e) {
            throw InputError(std::string("force expression error: ") + e.what());
        }
    }

    if (const TomlTable* sampling = doc.section("sampling")) {
        check_known_keys(*sampling, {"box", "seed"}, "[sampling]");
        if (const TomlValue* box = sampling->find("box")) {
            std::vector<std::array<double, 2>> b;
            for (const auto& row : box->as_array("box")) {
                const auto& pair = row.as_array("box row");
                if (pair.size() != 2) throw InputError("box rows must be [lo, hi]");
                b.push_back({pair[0].as_number("box lo"), pair[1].as_number("box hi")});
            }
            if (static_cast<int>(b.size()) != m)
                throw InputError("sampling box must have one [lo, hi] pair per coordinate");
            for (const auto& [lo, hi] : b)
                if (!(lo < hi)) throw InputError("sampling box is empty in some coordinate");
            s.box = std::move(b);
        }
        if (const TomlValue* seed = sampling->find("seed"))
            s.seed = static_cast<std::uint64_t>(seed->as_int("seed"));
    }

    if (const TomlTable* tol = doc.section("tolerances")) {
        check_known_keys(*tol, {"identity", "section", "frame", "plane"}, "[tolerances]");
        if (const TomlValue* v = tol->find("identity")) s.tol.identity = v->as_number("identity");
        if (const TomlValue* v = tol->find("section")) s.tol.section = v->as_number("section");
        if (const TomlValue* v = tol->find("frame")) s.tol.frame = v->as_number("frame");
        if (const TomlValue* v = tol->find("plane")) s.tol.plane = v->as_number("plane");
    }

    return s;
}

ScenarioModel load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario_text(buf.str());
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit_string_list(std::ostream& os, const std::vector<std::string>& items) {
    os << '[';
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) os << ", ";
        os << '"' << items[i] << '"';
    }
    os << ']';
}

}  // namespace

std::string write_scenario(const ScenarioModel& s) {
    const auto& chart = s.manifold.chart;
    const int m = s.manifold.dim();
    std::ostringstream os;
    os << "spec_version = 1\n\n[manifold]\ncoords = ";
    emit_string_list(os, chart);
    os << "\nmetric = [\n";
    for (int i = 0; i < m; ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < m; ++j) row.push_back(s.manifold.g(i, j).str(chart));
        os << "  ";
        emit_string_list(os, row);
        os << (i + 1 < m ? ",\n" : "\n");
    }
    os << "]\n";

    if (s.distribution) {
        os << "\n[distribution]\ngenerators = [\n";
        for (std::size_t a = 0; a < s.distribution->generators.size(); ++a) {
            std::vector<std::string> row;
            for (const auto& e : s.distribution->generators[a].components)
                row.push_back(e.str(chart));
            os << "  ";
            emit_string_list(os, row);
            os << (a + 1 < s.distribution->generators.size() ? ",\n" : "\n");
        }
        os << "]\n";
    }

    if (s.force) {
        std::vector<std::string> row;
        for (const auto& e : s.force->components) row.push_back(e.str(chart));
        os << "\n[force]\ncomponents = ";
        emit_string_list(os, row);
        os << "\n";
    }

    if (s.box || s.seed) {
        os << "\n[sampling]\n";
        if (s.box) {
            os << "box = [";
            for (std::size_t i = 0; i < s.box->size(); ++i) {
                if (i) os << ", ";
                os << '[' << fmt((*s.box)[i][0]) << ", " << fmt((*s.box)[i][1]) << ']';
            }
            os << "]\n";
        }
        os << "seed = " << s.seed << "\n";
    }

    Tolerances def;
    if (s.tol.identity != def.identity || s.tol.section != def.section ||
        s.tol.frame != def.frame || s.tol.plane != def.plane) {
        os << "\n[tolerances]\n";
        if (s.tol.identity != def.identity) os << "identity = " << fmt(s.tol.identity) << "\n";
        if (s.tol.section != def.section) os << "section = " << fmt(s.tol.section) << "\n";
        if (s.tol.frame != def.frame) os << "frame = " << fmt(s.tol.frame) << "\n";
        if (s.tol.plane != def.plane) os << "plane = " << fmt(s.tol.plane) << "\n";
    }
    return os.str();
}

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"FLAT2", "HEIS", "SPHERE", "KNIFE"};
    return names;
}

ScenarioModel builtin_fixture(const std::string& name) {
    auto euclid3 = [](std::vector<std::string> chart) {
        return ManifoldModel::make(std::move(chart), {{"1", "0", "0"},
                                                      {"0", "1", "0"},
                                                      {"0", "0", "1"}});
    };

    ScenarioModel s;
    if (name == "FLAT2") {
        // coordinate 2-plane foliation of Euclidean 3-space
        s.manifold = euclid3({"x", "y", "z"});
        s.distribution = DistributionModel::make(s.manifold, {{"1", "0", "0"}, {"0", "1", "0"}});
        s.box = {{{-1.0, 1.0}}, {{-1.0, 1.0}}, {{-1.0, 1.0}}};
    } else if (name == "HEIS") {
        // contact (Heisenberg) distribution: non-involutive, totally geodesic
        s.manifold = euclid3({"x", "y", "z"});
        s.distribution =
            DistributionModel::make(s.manifold, {{"1", "0", "-y/2"}, {"0", "1", "x/2"}});
        s.box = {{{-1.0, 1.0}}, {{-1.0, 1.0}}, {{-1.0, 1.0}}};
    } else if (name == "SPHERE") {
        // tangent planes of the spheres around the origin; generators are
        // rotation fields, independent wherever x != 0
        s.manifold = euclid3({"x", "y", "z"});
        s.distribution = DistributionModel::make(s.manifold, {{"z", "0", "-x"}, {"-y", "x", "0"}});
        s.box = {{{0.5, 2.0}}, {{-0.75, 0.75}}, {{-0.75, 0.75}}};
    } else if (name == "KNIFE") {
        // knife edge / sleigh: heading-aligned velocity constraint, driven
        // along +x
        s.manifold = euclid3({"x", "y", "theta"});
        s.distribution = DistributionModel::make(
            s.manifold, {{"cos(theta)", "sin(theta)", "0"}, {"0", "0", "1"}});
        s.force = VectorFieldModel::parse({"1", "0", "0"}, s.manifold.chart);
        s.box = {{{-2.0, 2.0}}, {{-2.0, 2.0}}, {{-1.2, 1.2}}};
    } else {
        throw InputError("unknown fixture '" + name + "' (known: FLAT2, HEIS, SPHERE, KNIFE)");
    }
    return s;
}

namespace {

bool same_field(const VectorFieldModel& a, const VectorFieldModel& b) {
    if (a.components.size() != b.components.size()) return false;
    for (std::size_t i = 0; i < a.components.size(); ++i)
        if (!a.components[i].same_tree(b.components[i])) return false;
    return true;
}

}  // namespace

bool structurally_equal(const ScenarioModel& a, const ScenarioModel& b) {
    if (a.manifold.chart != b.manifold.chart) return false;
    if (a.manifold.metric.size() != b.manifold.metric.size()) return false;
    for (std::size_t i = 0; i < a.manifold.metric.size(); ++i)
        if (!a.manifold.metric[i].same_tree(b.manifold.metric[i])) return false;

    if (a.distribution.has_value() != b.distribution.has_value()) return false;
    if (a.distribution) {
        if (a.distribution->generators.size() != b.distribution->generators.size()) return false;
        for (std::size_t i = 0; i < a.distribution->generators.size(); ++i)
            if (!same_field(a.distribution->generators[i], b.distribution->generators[i]))
                return false;
    }

    if (a.force.has_value() != b.force.has_value()) return false;
    if (a.force && !same_field(*a.force, *b.force)) return false;

    if (a.box != b.box) return false;
    if (a.seed != b.seed) return false;
    return a.tol.identity == b.tol.identity && a.tol.section == b.tol.section &&
           a.tol.frame == b.tol.frame && a.tol.plane == b.tol.plane;
}

}  // namespace distgeo
