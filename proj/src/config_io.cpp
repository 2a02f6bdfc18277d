#include "eprsim/config_io.hpp"

#include "eprsim/errors.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace eprsim {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json &obj, const std::vector<std::string> &known,
                         const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const auto &k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw ValidationError("unknown key \"" + it.key() + "\" in " + where);
        }
    }
}

double require_number(const json &j, const std::string &where) {
    if (!j.is_number()) {
        throw ValidationError(where + " must be a number");
    }
    return j.get<double>();
}

cplx parse_complex(const json &j, const std::string &where) {
    if (!j.is_object()) {
        throw ValidationError(where + " must be an object {\"re\": ..., \"im\": ...}");
    }
    reject_unknown_keys(j, {"re", "im"}, where);
    if (!j.contains("re") || !j.contains("im")) {
        throw ValidationError(where + " needs both \"re\" and \"im\"");
    }
    return cplx(require_number(j["re"], where + ".re"), require_number(j["im"], where + ".im"));
}

json complex_to_json(const cplx &z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

UnitaryMatrix parse_coupling_matrix(const json &j) {
    if (!j.is_array() || j.empty()) {
        throw ValidationError("\"coupling\" must be \"ideal\" or a non-empty square matrix");
    }
    const std::size_t n = j.size();
    std::vector<cplx> entries;
    entries.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const json &row = j[r];
        if (!row.is_array() || row.size() != n) {
            throw ValidationError("\"coupling\" row " + std::to_string(r) + " must have " +
                                  std::to_string(n) + " entries");
        }
        for (std::size_t c = 0; c < n; ++c) {
            entries.push_back(parse_complex(row[c], "coupling[" + std::to_string(r) + "][" +
                                                        std::to_string(c) + "]"));
        }
    }
    // The UnitaryMatrix constructor rejects non-unitary input, citing
    // the measured defect.
    return UnitaryMatrix(n, std::move(entries));
}

std::uint64_t require_uint(const json &j, const std::string &where) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    throw ValidationError(where + " must be a non-negative integer");
}

} // namespace

ChainConfig config_from_json(const json &j) {
    if (!j.is_object()) {
        throw ValidationError("config document must be a JSON object");
    }
    reject_unknown_keys(j,
                        {"dimension", "amplitudes", "chain_depth", "coupling", "shots", "seed",
                         "measure_particle_after", "thresholds"},
                        "config");

    if (!j.contains("dimension")) {
        throw ValidationError("config is missing required field \"dimension\"");
    }
    std::uint64_t dimension = require_uint(j["dimension"], "\"dimension\"");

    if (!j.contains("amplitudes")) {
        throw ValidationError("config is missing required field \"amplitudes\"");
    }
    const json &amps_json = j["amplitudes"];
    if (!amps_json.is_array()) {
        throw ValidationError("\"amplitudes\" must be an array of {re, im} objects");
    }
    std::vector<cplx> amplitudes;
    amplitudes.reserve(amps_json.size());
    for (std::size_t i = 0; i < amps_json.size(); ++i) {
        amplitudes.push_back(parse_complex(amps_json[i], "amplitudes[" + std::to_string(i) + "]"));
    }

    std::size_t chain_depth = 1;
    if (j.contains("chain_depth")) {
        chain_depth = static_cast<std::size_t>(require_uint(j["chain_depth"], "\"chain_depth\""));
    }

    std::optional<UnitaryMatrix> coupling;
    if (j.contains("coupling")) {
        const json &c = j["coupling"];
        if (c.is_string()) {
            if (c.get<std::string>() != "ideal") {
                throw ValidationError("\"coupling\" string value must be \"ideal\", got \"" +
                                      c.get<std::string>() + "\"");
            }
        } else {
            coupling = parse_coupling_matrix(c);
        }
    }

    std::uint64_t shots = 100000;
    if (j.contains("shots")) {
        shots = require_uint(j["shots"], "\"shots\"");
    }

    std::uint64_t seed = 0;
    if (j.contains("seed")) {
        seed = require_uint(j["seed"], "\"seed\"");
    }

    bool measure_particle_after = false;
    if (j.contains("measure_particle_after")) {
        if (!j["measure_particle_after"].is_boolean()) {
            throw ValidationError("\"measure_particle_after\" must be a boolean");
        }
        measure_particle_after = j["measure_particle_after"].get<bool>();
    }

    Thresholds thresholds;
    if (j.contains("thresholds")) {
        const json &t = j["thresholds"];
        if (!t.is_object()) {
            throw ValidationError("\"thresholds\" must be an object");
        }
        reject_unknown_keys(t, {"sigma", "tv_max"}, "thresholds");
        if (t.contains("sigma")) {
            thresholds.sigma = require_number(t["sigma"], "thresholds.sigma");
        }
        if (t.contains("tv_max")) {
            thresholds.tv_max = require_number(t["tv_max"], "thresholds.tv_max");
        }
    }

    return ChainConfig(static_cast<std::size_t>(dimension), std::move(amplitudes), chain_depth,
                       std::move(coupling), shots, seed, measure_particle_after, thresholds);
}

ChainConfig parse_config_text(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        // Translate the byte offset into line/column.
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t stop = e.byte > 0 ? e.byte - 1 : 0;
        for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("config is not valid JSON at line " + std::to_string(line) +
                         ", column " + std::to_string(column) + ": " + e.what());
    }
    return config_from_json(j);
}

ChainConfig parse_config_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ArgumentError("cannot read config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ParseError &e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError &e) {
        throw ValidationError(path + ": " + e.what());
    }
}

json config_to_json(const ChainConfig &config) {
    json amps = json::array();
    for (const cplx &a : config.amplitudes()) {
        amps.push_back(complex_to_json(a));
    }
    json coupling;
    if (config.ideal_coupling()) {
        coupling = "ideal";
    } else {
        const UnitaryMatrix &u = *config.explicit_coupling();
        coupling = json::array();
        for (std::size_t r = 0; r < u.dim(); ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < u.dim(); ++c) {
                row.push_back(complex_to_json(u.at(r, c)));
            }
            coupling.push_back(row);
        }
    }
    json thresholds{{"sigma", config.thresholds().sigma}};
    if (config.thresholds().tv_max) {
        thresholds["tv_max"] = *config.thresholds().tv_max;
    }
    return json{{"dimension", config.dimension()},
                {"amplitudes", amps},
                {"chain_depth", config.chain_depth()},
                {"coupling", coupling},
                {"shots", config.shots()},
                {"seed", config.seed()},
                {"measure_particle_after", config.measure_particle_after()},
                {"thresholds", thresholds}};
}

} // namespace eprsim
