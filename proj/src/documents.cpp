#include "evidence/documents.hpp"

#include "evidence/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace evidence {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DocumentError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json load_json_file(const std::string& path) {
    try {
        return Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw DocumentError("'" + path + "' is not valid JSON: " + e.what());
    }
}

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw DocumentError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::vector<std::string> names(const Json& j, const char* key) {
    const Json& a = field(j, key);
    if (!a.is_array()) throw DocumentError(std::string("field '") + key + "' must be a list");
    std::vector<std::string> out;
    for (const auto& x : a) {
        if (!x.is_string()) throw DocumentError(std::string("field '") + key + "' must hold strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

std::vector<std::vector<Rational>> matrix(const Json& m, const std::vector<std::string>& rows,
                                          const std::vector<std::string>& cols, const char* what) {
    if (!m.is_object()) throw DocumentError(std::string("field '") + what + "' must be a map");
    for (auto it = m.begin(); it != m.end(); ++it) {
        if (std::find(rows.begin(), rows.end(), it.key()) == rows.end())
            throw UnknownName("'" + std::string(what) + "' names unknown '" + it.key() + "'");
        if (!it.value().is_object()) throw DocumentError(std::string("rows of '") + what + "' must be maps");
        for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
            if (std::find(cols.begin(), cols.end(), jt.key()) == cols.end())
                throw UnknownName("'" + std::string(what) + "' names unknown '" + jt.key() + "'");
    }
    std::vector<std::vector<Rational>> out(rows.size(), std::vector<Rational>(cols.size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        if (!m.contains(rows[r])) continue;
        const Json& row = m.at(rows[r]);
        for (size_t c = 0; c < cols.size(); ++c)
            if (row.contains(cols[c])) out[r][c] = rational_from_json(row.at(cols[c]));
    }
    return out;
}

std::string resolve(const std::string& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative()) path = std::filesystem::path(base) / path;
    return path.string();
}

EvidenceSpace space_field(const Json& j, const std::string& base_dir) {
    const Json& s = field(j, "space");
    if (s.is_string()) {
        std::string path = resolve(base_dir, s.get<std::string>());
        return space_from_json(load_json_file(path));
    }
    return space_from_json(s);
}

Sequence sequence_field(const Json& j, const char* key) {
    if (!j.contains(key)) return {};
    return names(j, key);
}

} // namespace

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_unsigned()) return Rational(j.get<unsigned long>());
    throw DocumentError("rationals must be written as \"p/q\" strings or integers");
}

Json rational_to_json(const Rational& r) { return r.str(); }

EvidenceSpace space_from_json(const Json& j) {
    auto hyps = names(j, "hypotheses");
    auto obs = names(j, "observations");
    auto mu = matrix(field(j, "likelihoods"), hyps, obs, "likelihoods");
    return EvidenceSpace(std::move(hyps), std::move(obs), std::move(mu));
}

Json space_to_json(const EvidenceSpace& s) {
    Json j;
    j["hypotheses"] = s.hypotheses();
    j["observations"] = s.observations();
    Json lk = Json::object();
    for (size_t h = 0; h < s.num_hypotheses(); ++h) {
        Json row = Json::object();
        for (size_t o = 0; o < s.num_observations(); ++o)
            row[s.observations()[o]] = rational_to_json(s.likelihood(h, o));
        lk[s.hypotheses()[h]] = std::move(row);
    }
    j["likelihoods"] = std::move(lk);
    return j;
}

WeightTable table_from_json(const Json& j) {
    auto hyps = names(j, "hypotheses");
    auto obs = names(j, "observations");
    auto e = matrix(field(j, "weights"), obs, hyps, "weights");
    return WeightTable(std::move(hyps), std::move(obs), std::move(e));
}

Json table_to_json(const WeightTable& t) {
    Json j;
    j["hypotheses"] = t.hypotheses();
    j["observations"] = t.observations();
    Json w = Json::object();
    for (size_t o = 0; o < t.num_observations(); ++o) {
        Json row = Json::object();
        for (size_t h = 0; h < t.num_hypotheses(); ++h)
            row[t.hypotheses()[h]] = rational_to_json(t.entry(o, h));
        w[t.observations()[o]] = std::move(row);
    }
    j["weights"] = std::move(w);
    return j;
}

Distribution distribution_from_json(const Json& j, const std::vector<std::string>& support) {
    if (!j.is_object()) throw DocumentError("a distribution must be a map from names to rationals");
    std::map<std::string, Rational> m;
    for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = rational_from_json(it.value());
    return Distribution::from_map(support, m);
}

Json distribution_to_json(const Distribution& d) {
    Json j = Json::object();
    for (size_t i = 0; i < d.size(); ++i) j[d.support()[i]] = rational_to_json(d.at(i));
    return j;
}

EvidentialWorld world_from_json(const Json& j, const std::string& base_dir) {
    EvidenceSpace space = space_field(j, base_dir);
    Distribution prior = distribution_from_json(field(j, "prior"), space.hypotheses());
    const Json& h = field(j, "hypothesis");
    const Json& o = field(j, "observation");
    if (!h.is_string() || !o.is_string()) throw DocumentError("hypothesis and observation must be strings");
    return EvidentialWorld(h.get<std::string>(), o.get<std::string>(), std::move(prior), std::move(space));
}

Json world_to_json(const EvidentialWorld& w) {
    Json j;
    j["hypothesis"] = w.hypothesis;
    j["observation"] = w.observation;
    j["prior"] = distribution_to_json(w.prior);
    j["space"] = space_to_json(w.space);
    return j;
}

EvidentialRun run_from_json(const Json& j, const std::string& base_dir) {
    EvidenceSpace space = space_field(j, base_dir);
    Distribution prior = distribution_from_json(field(j, "prior"), space.hypotheses());
    const Json& h = field(j, "hypothesis");
    if (!h.is_string()) throw DocumentError("hypothesis must be a string");
    return EvidentialRun(h.get<std::string>(), std::move(prior), std::move(space),
                         sequence_field(j, "trace_prefix"), names(j, "trace_cycle"));
}

Json run_to_json(const EvidentialRun& r) {
    Json j;
    j["hypothesis"] = r.hypothesis;
    j["prior"] = distribution_to_json(r.prior);
    j["space"] = space_to_json(r.space);
    j["trace_prefix"] = r.prefix;
    j["trace_cycle"] = r.cycle;
    return j;
}

} // namespace evidence
