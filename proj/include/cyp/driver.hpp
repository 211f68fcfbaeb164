#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cyp/blueprint.hpp"
#include "cyp/diagnostics.hpp"
#include "cyp/parser.hpp"
#include "cyp/proofcheck.hpp"
#include "cyp/resolve.hpp"
#include "cyp/typecheck.hpp"

namespace cyp {

// The whole pipeline behind the command line: parse, blueprint-match when a
// blueprint is given, resolve, type check, proof check. Exit codes:
//   0  every lemma Complete and no hole anywhere
//   1  a diagnostic (parse/resolve/type/match error or a Failed proof)
//   2  nothing failed but holes remain (0 with allow_incomplete)

struct Options {
    std::optional<std::string> blueprint_path;
    std::string module_path;
    bool machine = false;
    bool allow_incomplete = false;
};

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

namespace detail {

inline std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string format_hole(const HoleSite& h, const std::string& file) {
    std::ostringstream out;
    out << "hole: " << hole_kind_name(h.kind) << " at ";
    if (h.span)
        out << h.span->file << ":" << h.span->begin.line << ":" << h.span->begin.column << "-"
            << h.span->end.line << ":" << h.span->end.column;
    else
        out << file;
    return out.str();
}

} // namespace detail

// Run on in-memory sources; `sources` maps each path the options mention to
// its text. Used by run() and directly by tests.
inline Outcome run_pipeline(const Options& opt, const std::map<std::string, std::string>& sources) {
    std::ostringstream out;
    std::ostringstream err;
    auto fail = [&](const Diagnostic& d) {
        err << (opt.machine ? machine_line(d) + "\n" : render(d, sources));
        return Outcome{1, out.str(), err.str()};
    };

    try {
        Module raw = parse_module(sources.at(opt.module_path), opt.module_path);
        if (opt.blueprint_path) {
            Module blueprint = parse_module(sources.at(*opt.blueprint_path), *opt.blueprint_path);
            raw = match_module(blueprint, raw);
        }
        Module resolved = resolve_names(raw);
        TypeEnv env = check_module_types(resolved);
        ModuleReport report = check_module(resolved, env);

        for (const LemmaVerdict& lv : report.lemmas) {
            out << "Lemma " << lv.name << ": ";
            switch (lv.result.status) {
                case ProofResult::Status::Complete: out << "complete\n"; break;
                case ProofResult::Status::Incomplete: out << "incomplete\n"; break;
                case ProofResult::Status::Failed: out << "FAILED\n"; break;
            }
        }
        for (const LemmaVerdict& lv : report.lemmas)
            if (lv.result.failed_p()) return fail(*lv.result.diag);

        std::vector<HoleSite> holes = report.all_holes();
        std::stable_sort(holes.begin(), holes.end(), [](const HoleSite& a, const HoleSite& b) {
            if (a.span.has_value() != b.span.has_value()) return a.span.has_value();
            if (!a.span) return false;
            return std::tie(a.span->file, a.span->begin) < std::tie(b.span->file, b.span->begin);
        });
        for (const HoleSite& h : holes) out << detail::format_hole(h, opt.module_path) << "\n";

        if (!holes.empty()) {
            out << "result: incomplete (" << holes.size() << " hole"
                << (holes.size() == 1 ? "" : "s") << ")\n";
            return Outcome{opt.allow_incomplete ? 0 : 2, out.str(), err.str()};
        }
        out << "result: complete\n";
        return Outcome{0, out.str(), err.str()};
    } catch (const DiagnosticError& e) {
        return fail(e.diag());
    }
}

// Read the files named in the options, then run the pipeline on them.
inline Outcome run(const Options& opt) {
    std::map<std::string, std::string> sources;
    std::vector<std::string> paths{opt.module_path};
    if (opt.blueprint_path) paths.push_back(*opt.blueprint_path);
    for (const std::string& p : paths) {
        auto text = detail::read_file(p);
        if (!text) {
            Diagnostic d{Phase::Parse, "cannot read file '" + p + "'", {}, p};
            std::string rendered = machine_line(d) + "\n";
            return Outcome{1, "", rendered};
        }
        sources[p] = std::move(*text);
    }
    return run_pipeline(opt, sources);
}

} // namespace cyp
