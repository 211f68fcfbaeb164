#pragma once

#include <exception>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cyp/span.hpp"

namespace cyp {

enum class Phase { Parse, Resolve, Type, Proof, Match };

inline const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Parse: return "parse";
        case Phase::Resolve: return "resolve";
        case Phase::Type: return "type";
        case Phase::Proof: return "proof";
        case Phase::Match: return "match";
    }
    return "?";
}

// An error value carrying the message and the source ranges it talks about.
// Spans may be empty only for whole-file conditions (missing file, etc.);
// file_hint then names the file the condition is about.
struct Diagnostic {
    Phase phase = Phase::Parse;
    std::string message;
    std::vector<Span> spans;
    std::string file_hint;
};

// Fail-fast carrier: the first diagnostic aborts the current file's pipeline.
class DiagnosticError : public std::exception {
public:
    explicit DiagnosticError(Diagnostic d) : diag_(std::move(d)) {}
    const Diagnostic& diag() const { return diag_; }
    const char* what() const noexcept override { return diag_.message.c_str(); }

private:
    Diagnostic diag_;
};

[[noreturn]] inline void raise(Phase phase, std::string message, std::vector<Span> spans = {},
                               std::string file_hint = {}) {
    throw DiagnosticError(Diagnostic{phase, std::move(message), std::move(spans), std::move(file_hint)});
}

namespace detail {

// Byte offsets of every line start, so spans can be cut out of the source.
inline std::vector<size_t> line_starts(const std::string& text) {
    std::vector<size_t> starts{0};
    for (size_t i = 0; i < text.size(); ++i)
        if (text[i] == '\n') starts.push_back(i + 1);
    return starts;
}

inline size_t byte_offset(const std::vector<size_t>& starts, SourcePos p) {
    if (p.line < 1) return 0;
    size_t li = static_cast<size_t>(p.line - 1);
    if (li >= starts.size()) li = starts.size() - 1;
    return starts[li] + static_cast<size_t>(p.column - 1);
}

} // namespace detail

// The exact bytes the span covers. Rendering reproduces input verbatim,
// never a pretty-printed reconstruction.
inline std::string source_slice(const std::string& text, const Span& span) {
    auto starts = detail::line_starts(text);
    size_t from = detail::byte_offset(starts, span.begin);
    size_t to = detail::byte_offset(starts, span.end);
    if (from > text.size()) from = text.size();
    if (to > text.size()) to = text.size();
    if (to < from) to = from;
    return text.substr(from, to - from);
}

// Human-readable rendering: message, then per span the location, the source
// lines it covers, and a caret underline.
inline std::string render(const Diagnostic& d, const std::map<std::string, std::string>& sources) {
    std::ostringstream out;
    out << phase_name(d.phase) << " error: " << d.message << "\n";
    for (const Span& span : d.spans) {
        out << "  --> " << span.file << ":" << span.begin.line << ":" << span.begin.column << "-"
            << span.end.line << ":" << span.end.column << "\n";
        auto it = sources.find(span.file);
        if (it == sources.end()) continue;
        const std::string& text = it->second;
        auto starts = detail::line_starts(text);
        for (int line = span.begin.line; line <= span.end.line; ++line) {
            if (line < 1 || static_cast<size_t>(line) > starts.size()) break;
            size_t b = starts[static_cast<size_t>(line - 1)];
            size_t e = text.find('\n', b);
            if (e == std::string::npos) e = text.size();
            std::string content = text.substr(b, e - b);
            out << "  " << line << " | " << content << "\n";
            size_t first = (line == span.begin.line) ? static_cast<size_t>(span.begin.column) : 1;
            size_t last = (line == span.end.line) ? static_cast<size_t>(span.end.column) : content.size() + 1;
            if (last <= first) last = first + 1;
            std::string marker(std::to_string(line).size(), ' ');
            out << "  " << marker << " | ";
            for (size_t c = 1; c < first; ++c) out << ' ';
            for (size_t c = first; c < last && c <= content.size() + 1; ++c) out << '^';
            out << "\n";
        }
    }
    return out.str();
}

// One-line machine form: file:line:col: phase: message
inline std::string machine_line(const Diagnostic& d) {
    std::ostringstream out;
    if (!d.spans.empty()) {
        const Span& s = d.spans.front();
        out << s.file << ":" << s.begin.line << ":" << s.begin.column;
    } else {
        out << (d.file_hint.empty() ? "-" : d.file_hint) << ":0:0";
    }
    out << ": " << phase_name(d.phase) << ": " << d.message;
    return out.str();
}

} // namespace cyp
