#pragma once

#include <optional>
#include <string>
#include <tuple>

namespace cyp {

// 1-based line/column source position. Columns count bytes.
struct SourcePos {
    int line = 0;
    int column = 0;

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
    friend auto operator<=>(const SourcePos& a, const SourcePos& b) {
        return std::tie(a.line, a.column) <=> std::tie(b.line, b.column);
    }
};

// Half-open source range: [begin, end). Nodes synthesized during checking
// carry no span, hence std::optional<Span> throughout the AST.
struct Span {
    std::string file;
    SourcePos begin;
    SourcePos end;

    friend bool operator==(const Span&, const Span&) = default;
};

using MaybeSpan = std::optional<Span>;

inline Span join(const Span& a, const Span& b) {
    Span s = a;
    if (b.begin < s.begin) s.begin = b.begin;
    if (s.end < b.end) s.end = b.end;
    return s;
}

inline MaybeSpan join(const MaybeSpan& a, const MaybeSpan& b) {
    if (a && b) return join(*a, *b);
    return a ? a : b;
}

} // namespace cyp
