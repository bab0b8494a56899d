#include "evidence/cli.hpp"

#include "evidence/audit.hpp"
#include "evidence/characterization.hpp"
#include "evidence/documents.hpp"
#include "evidence/errors.hpp"
#include "evidence/parser.hpp"
#include "evidence/rcf.hpp"
#include "evidence/sat_solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace evidence {

namespace {

constexpr int kTrue = 0, kFalse = 1, kUnknown = 2, kUsage = 3;

const char* kFormats = R"(File formats (JSON; rationals are strings "p/q", integers may be bare):
  space   {"hypotheses": [..], "observations": [..], "likelihoods": {h: {ob: r}}}
          missing likelihood entries are 0
  table   {"hypotheses": [..], "observations": [..], "weights": {ob: {h: r}}}
  world   {"hypothesis": h, "observation": ob, "prior": {h: r}, "space": <space or path>}
  run     {"hypothesis": h, "prior": {h: r}, "space": <space or path>,
           "trace_prefix": [ob, ..], "trace_cycle": [ob, ..]}
  prior   {h: r, ..}
Formula files may start with a header "hypotheses: a, b; observations: u, v;"
and use '#' comments. Witness files for emit-rcf --decode are either
"name = p/q" lines or an SMT-LIB model of define-fun entries.
The EVIDENCE_TOLERANCE environment variable sets the default for --tolerance.)";

std::string approx(const Rational& r, int digits) {
    if (digits <= 0) return r.str();
    double d = r.to_double();
    std::string shown;
    if (r.is_zero() || (std::fabs(d) >= 1e-3 && std::fabs(d) < 1e15)) {
        shown = r.decimal(digits);
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*e", digits, d);
        shown = buf;
    }
    return r.str() + " (~" + shown + ")";
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ' && c != '\t') {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

std::string dir_of(const std::string& path) {
    auto p = std::filesystem::path(path).parent_path();
    return p.empty() ? "." : p.string();
}

Json load_world_json(const std::string& path) {
    Json j = load_json_file(path);
    // a `sat --json` result carries its world under "model"
    if (j.contains("model") && j["model"].is_object()) return j["model"];
    return j;
}

struct SignatureArgs {
    std::string space;
    std::string hypotheses;
    std::string observations;

    void attach(CLI::App* app) {
        app->add_option("--space", space, "take the signature from a space document");
        app->add_option("--hypotheses", hypotheses, "comma-separated hypothesis names");
        app->add_option("--observations", observations, "comma-separated observation names");
    }

    std::optional<Signature> get() const {
        if (!space.empty()) return Signature::of(space_from_json(load_json_file(space)));
        if (hypotheses.empty() && observations.empty()) return std::nullopt;
        return Signature(split_list(hypotheses), split_list(observations));
    }
};

struct FormulaArgs {
    std::string text;
    std::string file;

    void attach(CLI::App* app) {
        app->add_option("formula", text, "formula text");
        app->add_option("-f,--formula-file", file, "read the formula from a file");
    }

    FormulaFile parse(const std::optional<Signature>& sig, Dialect dialect) const {
        if (text.empty() == file.empty()) throw CLI::ValidationError("give exactly one of FORMULA or --formula-file");
        std::string src = file.empty() ? text : read_text_file(file);
        return parse_formula_file(src, sig, dialect);
    }
};

void print_distribution(std::ostream& out, const Distribution& d, int digits) {
    for (size_t i = 0; i < d.size(); ++i) out << (i ? ", " : "") << d.support()[i] << "=" << approx(d.at(i), digits);
    out << "\n";
}

void print_world(std::ostream& out, const EvidentialWorld& w, int digits, const std::string& indent) {
    out << indent << "hypothesis: " << w.hypothesis << "\n";
    out << indent << "observation: " << w.observation << "\n";
    out << indent << "prior: ";
    print_distribution(out, w.prior, digits);
    out << indent << "likelihoods:\n";
    for (const auto& h : w.space.hypotheses()) {
        out << indent << "  " << h << ": ";
        print_distribution(out, w.space.likelihood_row(h), digits);
    }
    out << indent << "weights:\n";
    for (const auto& ob : w.space.observations()) {
        out << indent << "  " << ob << ": ";
        print_distribution(out, weight_column(w.space, ob), digits);
    }
    try {
        Distribution post = world_posterior(w);
        out << indent << "posterior: ";
        print_distribution(out, post, digits);
    } catch (const Error&) {
    }
}

// ---- subcommands -------------------------------------------------------------

struct EvalCmd {
    FormulaArgs formula;
    std::string world, run;
    size_t time = 0;
    bool unnormalized = false, strict_prior = false, json = false;
    std::vector<std::string> lets;

    void attach(CLI::App* app) {
        formula.attach(app);
        app->add_option("--world", world, "world document (or a sat --json result)");
        app->add_option("--run", run, "run document");
        app->add_option("--time", time, "point of the run to evaluate at");
        app->add_flag("--unnormalized", unnormalized, "use unnormalized weights w^u");
        app->add_flag("--strict-prior", strict_prior, "reject structures whose true hypothesis has prior 0");
        app->add_option("--let", lets, "value of a free variable, name=p/q; repeatable")->allow_extra_args(false);
        app->add_flag("--json", json, "machine-readable output");
    }

    int exec(std::ostream& out) {
        if (world.empty() == run.empty()) throw CLI::ValidationError("give exactly one of --world or --run");
        Valuation val;
        for (const auto& l : lets) {
            auto eq = l.find('=');
            if (eq == std::string::npos) throw CLI::ValidationError("--let expects name=value");
            val[l.substr(0, eq)] = Rational::parse(l.substr(eq + 1));
        }
        CheckOptions opts{unnormalized ? WeightSemantics::Unnormalized : WeightSemantics::Normalized, strict_prior};
        bool value;
        std::string printed;
        if (!world.empty()) {
            EvidentialWorld w = world_from_json(load_world_json(world), dir_of(world));
            FormulaFile ff = formula.parse(Signature::of(w.space), Dialect::Static);
            value = satisfies(*ff.result.formula, w, val, opts);
            printed = print(*ff.result.formula);
        } else {
            EvidentialRun r = run_from_json(load_json_file(run), dir_of(run));
            FormulaFile ff = formula.parse(Signature::of(r.space), Dialect::Dynamic);
            value = satisfies_at(*ff.result.formula, r, time, val, opts);
            printed = print(*ff.result.formula);
        }
        if (json) {
            Json j;
            j["formula"] = printed;
            j["value"] = value;
            if (!run.empty()) j["time"] = time;
            out << j.dump(2) << "\n";
        } else {
            out << (value ? "true" : "false") << "\n";
        }
        return value ? kTrue : kFalse;
    }
};

struct SatCmd {
    FormulaArgs formula;
    SignatureArgs sig;
    bool auto_sig = false, json = false, parallel = false;
    SolveOptions opts;
    int digits = 0;

    void attach(CLI::App* app) {
        formula.attach(app);
        sig.attach(app);
        if (const char* env = std::getenv("EVIDENCE_TOLERANCE")) opts.tolerance = std::strtod(env, nullptr);
        app->add_flag("--auto-signature", auto_sig, "solve over the formula's names plus fresh h* and ob*");
        app->add_option("--budget-boxes", opts.budget_boxes, "boxes per sign case")->capture_default_str();
        app->add_option("--max-depth", opts.max_depth, "maximum bisection depth")->capture_default_str();
        app->add_option("--tolerance", opts.tolerance, "residual allowed for approximate models")
            ->capture_default_str();
        app->add_option("--margin", opts.margin, "robustness margin for pruning")->capture_default_str();
        app->add_option("--seed", opts.seed, "seed for polishing restarts")->capture_default_str();
        app->add_option("--threads", opts.threads, "worker threads with --parallel (0 = all cores)");
        app->add_flag("--parallel", parallel, "search sign cases concurrently");
        app->add_option("--approx", digits, "add k-digit decimal approximations");
        app->add_flag("--json", json, "machine-readable output");
    }

    int exec(std::ostream& out) {
        opts.parallel = parallel;
        std::optional<Signature> given = sig.get();
        FormulaFile ff = formula.parse(given, Dialect::Static);
        Signature s = auto_sig ? augment_signature(*ff.result.formula) : ff.signature;
        SatResult r = solve(*ff.result.formula, s, opts);
        if (json) {
            Json j;
            j["verdict"] = verdict_name(r.verdict);
            j["route"] = r.route;
            if (!r.reason.empty()) j["reason"] = r.reason;
            j["formula"] = print(*ff.result.formula);
            j["signature"] = {{"hypotheses", s.hypotheses}, {"observations", s.observations}};
            if (r.model) {
                Json m = world_to_json(r.model->world);
                m["exact"] = r.model->exact;
                m["max_residual"] = r.model->max_residual;
                j["model"] = std::move(m);
            }
            const SatStats& st = r.stats;
            j["stats"] = {{"hypothesis_cases", st.hypothesis_cases}, {"observation_cases", st.observation_cases},
                          {"sign_cases", st.sign_cases},           {"cases_pruned_at_root", st.cases_pruned_at_root},
                          {"boxes", st.boxes},                     {"max_depth", st.max_depth},
                          {"polish_calls", st.polish_calls},       {"lp_calls", st.lp_calls},
                          {"seconds", st.seconds}};
            out << j.dump(2) << "\n";
        } else {
            out << verdict_name(r.verdict) << " (" << r.route << " route)\n";
            if (!r.reason.empty()) out << "reason: " << r.reason << "\n";
            if (r.model) {
                if (r.model->exact)
                    out << "model (exact):\n";
                else
                    out << "model (approximate, max residual " << r.model->max_residual << "):\n";
                print_world(out, r.model->world, digits, "  ");
            }
            const SatStats& st = r.stats;
            out << "stats: " << st.sign_cases << " sign cases (" << st.cases_pruned_at_root << " pruned at root), "
                << st.boxes << " boxes, depth " << st.max_depth << ", " << st.polish_calls << " polish calls, "
                << st.lp_calls << " LPs, " << st.seconds << " s\n";
        }
        switch (r.verdict) {
        case Verdict::Sat: return kTrue;
        case Verdict::Unsat: return kFalse;
        default: return kUnknown;
        }
    }
};

struct WeightsCmd {
    std::string space, mode = "normalized", observation;
    int digits = 0;
    bool json = false;

    void attach(CLI::App* app) {
        app->add_option("space", space, "space document")->required();
        app->add_option("--mode", mode, "normalized, unnormalized or shafer")
            ->check(CLI::IsMember({"normalized", "unnormalized", "shafer"}))
            ->capture_default_str();
        app->add_option("--observation", observation, "print one row only");
        app->add_option("--approx", digits, "add k-digit decimal approximations");
        app->add_flag("--json", json, "print a weight table document");
    }

    int exec(std::ostream& out) {
        EvidenceSpace s = space_from_json(load_json_file(space));
        std::vector<std::string> rows = s.observations();
        if (!observation.empty()) {
            s.observation_index(observation);
            rows = {observation};
        }
        auto value = [&](const std::string& ob, const std::string& h) {
            if (mode == "unnormalized") return unnormalized_weight(s, ob, h);
            if (mode == "shafer") return shafer_weight(s, ob, h);
            return weight_of_evidence(s, ob, h);
        };
        if (json) {
            std::vector<std::vector<Rational>> entry;
            for (const auto& ob : rows) {
                entry.emplace_back();
                for (const auto& h : s.hypotheses()) entry.back().push_back(value(ob, h));
            }
            Json j = table_to_json(WeightTable(s.hypotheses(), rows, std::move(entry)));
            j["mode"] = mode;
            out << j.dump(2) << "\n";
            return kTrue;
        }
        out << "# " << mode << " weights w(ob, h)\n";
        for (const auto& ob : rows) {
            out << ob << ":";
            for (const auto& h : s.hypotheses()) out << " " << h << "=" << approx(value(ob, h), digits);
            out << "\n";
        }
        return kTrue;
    }
};

struct CombineCmd {
    std::string space, prior;
    std::vector<std::string> sequences;
    int digits = 0;
    bool json = false, unnormalized = false;

    void attach(CLI::App* app) {
        app->add_option("space", space, "space document")->required();
        app->add_option("--prior", prior, "prior document (default uniform)");
        app->add_option("-s,--sequence", sequences, "comma-separated observations; repeatable")->allow_extra_args(false)->required();
        app->add_flag("--unnormalized", unnormalized, "combine unnormalized weights instead");
        app->add_option("--approx", digits, "add k-digit decimal approximations");
        app->add_flag("--json", json, "machine-readable output");
    }

    int exec(std::ostream& out) {
        EvidenceSpace s = space_from_json(load_json_file(space));
        Distribution pr = prior.empty() ? Distribution::uniform(s.hypotheses())
                                        : distribution_from_json(load_json_file(prior), s.hypotheses());
        Json results = Json::array();
        for (const auto& text : sequences) {
            Sequence seq = split_list(text);
            Distribution post = pr;
            if (unnormalized) {
                for (const auto& ob : seq) post = unnormalized_posterior(s, post, ob);
            } else {
                post = sequence_posterior(s, pr, seq);
            }
            if (json) {
                Json j;
                j["sequence"] = seq;
                if (!unnormalized) j["weights"] = distribution_to_json(sequence_weight_column(s, seq));
                j["posterior"] = distribution_to_json(post);
                results.push_back(std::move(j));
                continue;
            }
            out << "sequence " << sequence_name(seq) << "\n";
            if (!unnormalized) {
                out << "  weights: ";
                print_distribution(out, sequence_weight_column(s, seq), digits);
            }
            out << "  posterior: ";
            print_distribution(out, post, digits);
        }
        if (json) out << results.dump(2) << "\n";
        return kTrue;
    }
};

struct ReconstructCmd {
    std::string table;
    int digits = 0;
    bool json = false;

    void attach(CLI::App* app) {
        app->add_option("table", table, "weight table document")->required();
        app->add_option("--approx", digits, "add k-digit decimal approximations");
        app->add_flag("--json", json, "machine-readable output");
    }

    int exec(std::ostream& out) {
        WeightTable t = table_from_json(load_json_file(table));
        ReconstructResult r = reconstruct(t);
        if (json) {
            Json j;
            j["realizable"] = r.ok();
            j["message"] = r.message;
            if (r.space) j["space"] = space_to_json(*r.space);
            if (r.certificate) {
                Json c = Json::object();
                for (size_t i = 0; i < r.certificate->observations.size(); ++i)
                    c[r.certificate->observations[i]] = rational_to_json(r.certificate->scalars[i]);
                j["scalars"] = std::move(c);
            }
            out << j.dump(2) << "\n";
            return r.ok() ? kTrue : kFalse;
        }
        if (!r.ok()) {
            out << "not realizable: " << r.message << "\n";
            return kFalse;
        }
        out << "realizable\n";
        out << "scalars:";
        for (size_t i = 0; i < r.certificate->observations.size(); ++i)
            out << " " << r.certificate->observations[i] << "=" << approx(r.certificate->scalars[i], digits);
        out << "\nlikelihoods:\n";
        for (const auto& h : r.space->hypotheses()) {
            out << "  " << h << ": ";
            print_distribution(out, r.space->likelihood_row(h), digits);
        }
        return kTrue;
    }
};

struct AuditCmd {
    std::string world, run, groups;
    size_t horizon = 5;
    bool json = false, verbose = false;

    void attach(CLI::App* app) {
        app->add_option("--world", world, "world document");
        app->add_option("--run", run, "run document");
        app->add_option("--horizon", horizon, "last time point checked on a run")->capture_default_str();
        app->add_option("--groups", groups, "comma-separated axiom groups (H,O,Pr,Po,E,E',E5,E6,T)")->allow_extra_args(false);
        app->add_flag("-v,--verbose", verbose, "list every instance");
        app->add_flag("--json", json, "machine-readable output");
    }

    int exec(std::ostream& out) {
        if (world.empty() == run.empty()) throw CLI::ValidationError("give exactly one of --world or --run");
        std::vector<std::string> g = groups.empty() ? std::vector<std::string>{} : split_list(groups);
        AuditReport rep = world.empty()
                              ? audit_run(run_from_json(load_json_file(run), dir_of(run)), horizon, g)
                              : audit_world(world_from_json(load_world_json(world), dir_of(world)), g);
        if (json) {
            Json j;
            j["passed"] = rep.passed();
            j["failures"] = rep.failures();
            Json sum = Json::object();
            for (const auto& [axiom, counts] : rep.summary())
                sum[axiom] = {{"instances", counts.first}, {"failures", counts.second}};
            j["summary"] = std::move(sum);
            Json bad = Json::array();
            for (const auto& e : rep.entries)
                if (!e.passed || verbose)
                    bad.push_back({{"axiom", e.axiom}, {"instance", e.instance}, {"time", e.time},
                                   {"passed", e.passed}, {"detail", e.detail}});
            j["instances"] = std::move(bad);
            out << j.dump(2) << "\n";
        } else {
            for (const auto& [axiom, counts] : rep.summary())
                out << axiom << ": " << counts.first << " instances, " << counts.second << " failures\n";
            for (const auto& e : rep.entries) {
                if (e.passed && !verbose) continue;
                out << (e.passed ? "  ok   " : "  FAIL ") << e.axiom;
                if (!run.empty()) out << " @" << e.time;
                out << ": " << e.instance;
                if (!e.detail.empty()) out << " (" << e.detail << ")";
                out << "\n";
            }
            out << (rep.passed() ? "all instances hold" : std::to_string(rep.failures()) + " failing instances")
                << "\n";
        }
        return rep.passed() ? kTrue : kFalse;
    }
};

struct EmitCmd {
    FormulaArgs formula;
    SignatureArgs sig;
    bool dynamic = false, numerals = false, full = false, no_check = false, auto_sig = false;
    std::optional<size_t> horizon;
    std::string output, decode;

    void attach(CLI::App* app) {
        formula.attach(app);
        sig.attach(app);
        app->add_flag("--dynamic", dynamic, "dynamic translation (formulas with X)");
        app->add_option("--horizon", horizon, "time horizon N for the dynamic translation (default: X depth)");
        app->add_flag("--full-sequences", full, "emit sequence weights for every sequence up to the horizon");
        app->add_flag("--numerals", numerals, "write integers as numerals instead of the binary encoding");
        app->add_flag("--no-check-sat", no_check, "omit (check-sat) and (get-model)");
        app->add_flag("--auto-signature", auto_sig, "translate over the formula's names plus h* and ob*");
        app->add_option("-o,--output", output, "write the problem to a file");
        app->add_option("--decode", decode, "decode a witness for the translation instead of printing it");
    }

    int exec(std::ostream& out) {
        bool dyn = dynamic || horizon.has_value();
        FormulaFile ff = formula.parse(sig.get(), dyn ? Dialect::Dynamic : Dialect::Static);
        const Formula& f = *ff.result.formula;
        Signature s = auto_sig ? augment_signature(f) : ff.signature;
        rcf::RcfProblem p = dyn ? rcf::translate_dynamic(f, s, horizon.value_or(next_depth(f)), {full})
                                : rcf::translate_static(f, s);
        if (!decode.empty()) {
            rcf::Assignment a = rcf::parse_assignment(read_text_file(decode));
            rcf::DecodedWitness w;
            try {
                w = rcf::decode_witness(p, a);
            } catch (const DecodeInconsistent& e) {
                out << "inconsistent witness: " << e.what() << "\n";
                return kFalse;
            }
            Json j = w.world ? world_to_json(*w.world) : run_to_json(*w.run);
            if (w.unchecked) j["unchecked_assertions"] = w.unchecked;
            out << j.dump(2) << "\n";
            return kTrue;
        }
        std::string text = rcf::emit(p, {!numerals, !no_check});
        if (output.empty()) {
            out << text;
        } else {
            std::ofstream file(output, std::ios::binary);
            if (!file) throw DocumentError("cannot write " + output);
            file << text;
        }
        return kTrue;
    }
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weights of evidence: evaluation, satisfiability and translation to real arithmetic", "evidence"};
    app.footer(kFormats);
    app.require_subcommand(1, 1);

    EvalCmd eval;
    SatCmd sat;
    WeightsCmd weights;
    CombineCmd combine;
    ReconstructCmd recon;
    AuditCmd audit;
    EmitCmd emit_cmd;
    eval.attach(app.add_subcommand("eval", "check a formula at a world or at a point of a run"));
    sat.attach(app.add_subcommand("sat", "decide satisfiability of an L^w or L^ev formula"));
    weights.attach(app.add_subcommand("weights", "print the weight-of-evidence table of a space"));
    combine.attach(app.add_subcommand("combine", "fold observation sequences into a prior"));
    recon.attach(app.add_subcommand("reconstruct", "decide whether a weight table comes from a space"));
    audit.attach(app.add_subcommand("audit", "check axiom instances at a world or along a run"));
    emit_cmd.attach(app.add_subcommand("emit-rcf", "translate a formula to SMT-LIB real arithmetic"));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : kUsage;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        const std::string name = cmd->get_name();
        if (name == "eval") return eval.exec(out);
        if (name == "sat") return sat.exec(out);
        if (name == "weights") return weights.exec(out);
        if (name == "combine") return combine.exec(out);
        if (name == "reconstruct") return recon.exec(out);
        if (name == "audit") return audit.exec(out);
        if (name == "emit-rcf") return emit_cmd.exec(out);
    } catch (const ParseError& e) {
        err << "parse error at " << e.line() << ":" << e.column() << ": " << e.bare_message() << "\n";
        return kUsage;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace evidence
