#include "evidence/audit.hpp"
#include "evidence/characterization.hpp"
#include "evidence/documents.hpp"
#include "evidence/errors.hpp"
#include "evidence/parser.hpp"
#include "evidence/rcf.hpp"
#include "evidence/sat_solver.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace evidence;

namespace {

py::object fraction(const Rational& r) {
    static py::object Fraction = py::module_::import("fractions").attr("Fraction");
    py::object num = py::reinterpret_steal<py::object>(PyLong_FromString(to_string(r.numerator()).c_str(), nullptr, 10));
    py::object den = py::reinterpret_steal<py::object>(PyLong_FromString(to_string(r.denominator()).c_str(), nullptr, 10));
    return Fraction(num, den);
}

Rational rational(const py::handle& h) { return Rational::parse(py::str(h).cast<std::string>()); }

// Python containers travel through JSON text; Fractions become "p/q" strings.
Json to_json(const py::handle& obj) {
    static py::object json = py::module_::import("json");
    py::object text = json.attr("dumps")(obj, py::arg("default") = py::module_::import("builtins").attr("str"));
    return Json::parse(text.cast<std::string>());
}

py::object from_json(const Json& j) {
    static py::object json = py::module_::import("json");
    return json.attr("loads")(j.dump());
}

py::dict distribution_dict(const Distribution& d) {
    py::dict out;
    for (size_t i = 0; i < d.size(); ++i) out[py::str(d.support()[i])] = fraction(d.at(i));
    return out;
}

Signature signature(const std::vector<std::string>& hyps, const std::vector<std::string>& obs) {
    return Signature(hyps, obs);
}

py::dict weights(const py::object& space, const std::string& mode) {
    EvidenceSpace s = space_from_json(to_json(space));
    py::dict out;
    for (const auto& ob : s.observations()) {
        py::dict row;
        for (const auto& h : s.hypotheses()) {
            Rational v = mode == "unnormalized" ? unnormalized_weight(s, ob, h)
                         : mode == "shafer"     ? shafer_weight(s, ob, h)
                                                : weight_of_evidence(s, ob, h);
            row[py::str(h)] = fraction(v);
        }
        out[py::str(ob)] = row;
    }
    return out;
}

py::dict combine(const py::object& space, const py::object& prior, const std::vector<std::string>& seq) {
    EvidenceSpace s = space_from_json(to_json(space));
    Distribution pr = prior.is_none() ? Distribution::uniform(s.hypotheses())
                                      : distribution_from_json(to_json(prior), s.hypotheses());
    return distribution_dict(sequence_posterior(s, pr, seq));
}

py::dict sequence_weights(const py::object& space, const std::vector<std::string>& seq) {
    EvidenceSpace s = space_from_json(to_json(space));
    return distribution_dict(sequence_weight_column(s, seq));
}

py::dict do_reconstruct(const py::object& table) {
    ReconstructResult r = reconstruct(table_from_json(to_json(table)));
    py::dict out;
    out["realizable"] = r.ok();
    out["message"] = r.message;
    if (r.space) out["space"] = from_json(space_to_json(*r.space));
    if (r.certificate) {
        py::dict sc;
        for (size_t i = 0; i < r.certificate->observations.size(); ++i)
            sc[py::str(r.certificate->observations[i])] = fraction(r.certificate->scalars[i]);
        out["scalars"] = sc;
    }
    return out;
}

bool evaluate(const std::string& formula, const py::object& structure, const py::object& time,
              const py::dict& valuation, bool unnormalized) {
    Json j = to_json(structure);
    Valuation v;
    for (auto item : valuation) v[py::str(item.first).cast<std::string>()] = rational(item.second);
    CheckOptions opts{unnormalized ? WeightSemantics::Unnormalized : WeightSemantics::Normalized, false};
    if (j.contains("trace_cycle")) {
        EvidentialRun r = run_from_json(j);
        FormulaPtr f = parse(formula, Signature::of(r.space), Dialect::Dynamic);
        return satisfies_at(*f, r, time.is_none() ? 0 : time.cast<size_t>(), v, opts);
    }
    EvidentialWorld w = world_from_json(j);
    FormulaPtr f = parse(formula, Signature::of(w.space), Dialect::Static);
    return satisfies(*f, w, v, opts);
}

py::dict do_solve(const std::string& formula, const std::vector<std::string>& hyps,
                  const std::vector<std::string>& obs, bool auto_signature, size_t budget_boxes, size_t max_depth,
                  double tolerance, double margin, uint64_t seed, bool parallel) {
    FormulaPtr f = parse(formula, signature(hyps, obs));
    Signature sig = auto_signature ? augment_signature(*f) : signature(hyps, obs);
    SolveOptions opts;
    opts.budget_boxes = budget_boxes;
    opts.max_depth = max_depth;
    opts.tolerance = tolerance;
    opts.margin = margin;
    opts.seed = seed;
    opts.parallel = parallel;
    SatResult r;
    {
        py::gil_scoped_release release;
        r = solve(*f, sig, opts);
    }
    py::dict out;
    out["verdict"] = verdict_name(r.verdict);
    out["route"] = r.route;
    out["reason"] = r.reason;
    if (r.model) {
        out["model"] = from_json(world_to_json(r.model->world));
        out["exact"] = r.model->exact;
        out["max_residual"] = r.model->max_residual;
    } else {
        out["model"] = py::none();
    }
    py::dict st;
    st["sign_cases"] = r.stats.sign_cases;
    st["cases_pruned_at_root"] = r.stats.cases_pruned_at_root;
    st["boxes"] = r.stats.boxes;
    st["max_depth"] = r.stats.max_depth;
    st["polish_calls"] = r.stats.polish_calls;
    st["lp_calls"] = r.stats.lp_calls;
    st["seconds"] = r.stats.seconds;
    out["stats"] = st;
    return out;
}

py::dict audit(const py::object& structure, const std::vector<std::string>& groups, size_t horizon) {
    Json j = to_json(structure);
    AuditReport rep = j.contains("trace_cycle") ? audit_run(run_from_json(j), horizon, groups)
                                                : audit_world(world_from_json(j), groups);
    py::dict out;
    out["passed"] = rep.passed();
    out["failures"] = rep.failures();
    py::dict sum;
    for (const auto& [axiom, counts] : rep.summary()) sum[py::str(axiom)] = py::make_tuple(counts.first, counts.second);
    out["summary"] = sum;
    return out;
}

rcf::RcfProblem translation(const std::string& formula, const std::vector<std::string>& hyps,
                            const std::vector<std::string>& obs, const py::object& horizon) {
    Signature sig = signature(hyps, obs);
    if (horizon.is_none()) return rcf::translate_static(*parse(formula, sig), sig);
    return rcf::translate_dynamic(*parse(formula, sig, Dialect::Dynamic), sig, horizon.cast<size_t>());
}

} // namespace

PYBIND11_MODULE(pyevidence, m) {
    m.doc() = "Weights of evidence: exact evidence spaces, the evidence logic, and its decision tools";

    py::register_exception<Error>(m, "EvidenceError");
    py::register_exception<evidence::ParseError>(m, "FormulaParseError");

    m.def("weights", &weights, py::arg("space"), py::arg("mode") = "normalized",
          "Weight table {ob: {h: Fraction}} of a space document.");
    m.def("combine", &combine, py::arg("space"), py::arg("prior") = py::none(), py::arg("sequence"),
          "Posterior after observing the sequence (uniform prior by default).");
    m.def("sequence_weights", &sequence_weights, py::arg("space"), py::arg("sequence"));
    m.def("reconstruct", &do_reconstruct, py::arg("table"),
          "Decide whether a weight table is the weight function of some evidence space.");
    m.def("evaluate", &evaluate, py::arg("formula"), py::arg("structure"), py::arg("time") = py::none(),
          py::arg("valuation") = py::dict(), py::arg("unnormalized") = false,
          "Truth of a formula at a world document, or at a point of a run document.");
    m.def("canonical", [](const std::string& formula, const std::vector<std::string>& hyps,
                          const std::vector<std::string>& obs) { return print(*parse(formula, signature(hyps, obs))); },
          py::arg("formula"), py::arg("hypotheses"), py::arg("observations"));
    m.def("solve", &do_solve, py::arg("formula"), py::arg("hypotheses"), py::arg("observations"),
          py::arg("auto_signature") = false, py::arg("budget_boxes") = SolveOptions{}.budget_boxes,
          py::arg("max_depth") = SolveOptions{}.max_depth, py::arg("tolerance") = SolveOptions{}.tolerance,
          py::arg("margin") = 0.0, py::arg("seed") = 1, py::arg("parallel") = false);
    m.def("audit", &audit, py::arg("structure"), py::arg("groups") = std::vector<std::string>{},
          py::arg("horizon") = 5);
    m.def("emit_rcf",
          [](const std::string& formula, const std::vector<std::string>& hyps, const std::vector<std::string>& obs,
             const py::object& horizon, bool numerals) {
              return rcf::emit(translation(formula, hyps, obs, horizon), {!numerals, true});
          },
          py::arg("formula"), py::arg("hypotheses"), py::arg("observations"), py::arg("horizon") = py::none(),
          py::arg("numerals") = false);
    m.def("decode_witness",
          [](const std::string& formula, const std::vector<std::string>& hyps, const std::vector<std::string>& obs,
             const std::string& witness, const py::object& horizon) {
              rcf::DecodedWitness w = rcf::decode_witness(translation(formula, hyps, obs, horizon),
                                                          rcf::parse_assignment(witness));
              return from_json(w.world ? world_to_json(*w.world) : run_to_json(*w.run));
          },
          py::arg("formula"), py::arg("hypotheses"), py::arg("observations"), py::arg("witness"),
          py::arg("horizon") = py::none());
}
