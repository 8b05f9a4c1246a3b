#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vbcalc/algebroid.hpp"
#include "vbcalc/defcomplex.hpp"
#include "vbcalc/im.hpp"
#include "vbcalc/parser.hpp"
#include "vbcalc/vb.hpp"

namespace vbcalc {

/// Parsed declarative document: named blocks of kinds
/// algebroid | connection | vb | cochain | triple | imsection.
/// Every vb block also registers "<name>.total" and "<name>.fat" as
/// algebroids so cochain blocks can live over them.
struct SpecDocument {
    struct NamedConnection {
        std::string algebroid;
        Connection connection;
        std::size_t bundle_rank = 0;
    };
    struct NamedVB {
        SplitVB vb;
    };
    struct NamedTriple {
        std::string vb;
        IMTriple triple;
    };
    struct NamedIMSection {
        std::string algebroid;
        std::string connection;
        IMSectionCoords coords;
    };

    std::map<std::string, std::shared_ptr<const FrameAlgebroid>> algebroids;
    std::map<std::string, NamedConnection> connections;
    std::map<std::string, NamedVB> vbs;
    std::map<std::string, DefCochain> cochains;
    std::map<std::string, NamedTriple> triples;
    std::map<std::string, NamedIMSection> imsections;
    std::vector<std::string> order;  // block names in file order, kind-prefixed
};

namespace specdetail {

struct Line {
    int number;
    std::string text;
};

inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

/// Section-expression parsing: parse over chart + frame names, then demand
/// every term is linear-homogeneous in the frame symbols.
inline Section parse_section_expr(const std::string& text, const Chart& chart,
                                  const std::vector<std::string>& frame_names,
                                  int line) {
    for (const auto& f : frame_names)
        if (chart.find(f) >= 0)
            throw ParseError("frame name '" + f + "' shadows a coordinate", line, 1);
    Chart ext = chart.extended(frame_names);
    Polynomial p;
    try {
        p = parse_expression(text, ext);
    } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " (in section expression)", line,
                         e.column);
    }
    const std::size_t m = chart.dim();
    const std::size_t r = frame_names.size();
    Section s = Section::zero(chart, r);
    for (const auto& [mono, coef] : p.terms()) {
        int frame_slot = -1;
        unsigned frame_deg = 0;
        for (std::size_t i = 0; i < r; ++i) {
            frame_deg += mono[m + i];
            if (mono[m + i] > 0) frame_slot = static_cast<int>(i);
        }
        if (frame_deg != 1)
            throw ParseError("section expression must be linear in frame elements",
                             line, 1);
        Monomial base(mono.begin(), mono.begin() + m);
        s.coefficients[frame_slot] =
            s.coefficients[frame_slot] + Polynomial::monomial(chart, base, coef);
    }
    return s;
}

inline PolyVector parse_vector_expr(const std::string& text, const Chart& chart,
                                    int line) {
    auto parts = split_commas(text);
    if (chart.dim() == 0) {
        // over a point: accept "0" or an empty list
        if (parts.empty() || (parts.size() == 1 && trim(parts[0]) == "0"))
            return PolyVector::zero(chart);
        throw ParseError("vector field over a point must be 0", line, 1);
    }
    if (parts.size() != chart.dim())
        throw ParseError("expected " + std::to_string(chart.dim()) +
                             " vector components, got " + std::to_string(parts.size()),
                         line, 1);
    std::vector<Polynomial> comps;
    for (const auto& part : parts) {
        try {
            comps.push_back(parse_expression(part, chart));
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()), line, e.column);
        }
    }
    return PolyVector(chart, std::move(comps));
}

/// "name[i,j]" -> (name, i-1, j-1).
inline bool parse_indexed(const std::string& token, std::string& name, std::size_t& i,
                          std::size_t& j) {
    std::size_t lb = token.find('[');
    if (lb == std::string::npos || token.back() != ']') return false;
    name = token.substr(0, lb);
    auto inner = token.substr(lb + 1, token.size() - lb - 2);
    auto parts = split_commas(inner);
    if (parts.size() != 2) return false;
    try {
        long a = std::stol(trim(parts[0]));
        long b = std::stol(trim(parts[1]));
        if (a < 1 || b < 1) return false;
        i = static_cast<std::size_t>(a - 1);
        j = static_cast<std::size_t>(b - 1);
    } catch (...) {
        return false;
    }
    return true;
}

}  // namespace specdetail

/// Parser for the line-oriented spec-file format. Blocks start with
/// `<kind> <name> [args...]` and finish with `end`; '#' comments to the end
/// of the line; keys: base, frame, anchor, bracket, christoffel, degree,
/// value, symbol, X, U, V.
class SpecParser {
public:
    explicit SpecParser(unsigned poly_cap = 16, int degree_cap = 4)
        : poly_cap_(poly_cap), degree_cap_(degree_cap) {}

    SpecDocument parse(const std::string& text) {
        using namespace specdetail;
        SpecDocument doc;
        std::vector<Line> lines;
        {
            std::istringstream is(text);
            std::string raw;
            int n = 0;
            while (std::getline(is, raw)) {
                ++n;
                std::size_t hash = raw.find('#');
                if (hash != std::string::npos) raw = raw.substr(0, hash);
                std::string t = trim(raw);
                if (!t.empty()) lines.push_back({n, t});
            }
        }
        std::size_t pos = 0;
        while (pos < lines.size()) {
            auto head = split_ws(lines[pos].text);
            const std::string kind = head[0];
            int head_line = lines[pos].number;
            if (kind == "end")
                throw ParseError("'end' outside of a block", head_line, 1);
            if (head.size() < 2)
                throw ParseError("block '" + kind + "' needs a name", head_line, 1);
            std::vector<Line> body;
            std::size_t q = pos + 1;
            for (;; ++q) {
                if (q >= lines.size())
                    throw ParseError("missing 'end' for block '" + head[1] + "'",
                                     head_line, 1);
                if (lines[q].text == "end") break;
                body.push_back(lines[q]);
            }
            dispatch(doc, kind, head, head_line, body);
            pos = q + 1;
        }
        return doc;
    }

private:
    void dispatch(SpecDocument& doc, const std::string& kind,
                  const std::vector<std::string>& head, int head_line,
                  const std::vector<specdetail::Line>& body) {
        const std::string& name = head[1];
        if (doc.algebroids.count(name) || doc.connections.count(name) ||
            doc.vbs.count(name) || doc.cochains.count(name) ||
            doc.triples.count(name) || doc.imsections.count(name))
            throw ParseError("duplicate block name '" + name + "'", head_line, 1);
        if (kind == "algebroid")
            parse_algebroid(doc, name, head, head_line, body);
        else if (kind == "connection")
            parse_connection(doc, name, head, head_line, body);
        else if (kind == "vb")
            parse_vb(doc, name, head, head_line, body);
        else if (kind == "cochain")
            parse_cochain(doc, name, head, head_line, body);
        else if (kind == "triple")
            parse_triple(doc, name, head, head_line, body);
        else if (kind == "imsection")
            parse_imsection(doc, name, head, head_line, body);
        else
            throw ParseError("unknown block kind '" + kind + "'", head_line, 1);
        doc.order.push_back(kind + " " + name);
    }

    Polynomial parse_capped(const std::string& text, const Chart& chart, int line) {
        Polynomial p;
        try {
            p = parse_expression(text, chart);
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()), line, e.column);
        }
        if (p.total_degree() > poly_cap_)
            throw ParseError("polynomial exceeds the degree cap of " +
                                 std::to_string(poly_cap_),
                             line, 1);
        return p;
    }

    std::shared_ptr<const FrameAlgebroid> resolve_algebroid(const SpecDocument& doc,
                                                            const std::string& name,
                                                            int line) {
        auto it = doc.algebroids.find(name);
        if (it == doc.algebroids.end())
            throw ParseError("unknown algebroid '" + name + "'", line, 1);
        return it->second;
    }

    void parse_algebroid(SpecDocument& doc, const std::string& name,
                         const std::vector<std::string>& head, int head_line,
                         const std::vector<specdetail::Line>& body) {
        using namespace specdetail;
        if (head.size() != 2)
            throw ParseError("algebroid block takes no extra arguments", head_line, 1);
        std::vector<std::string> coords;
        std::vector<std::string> frame;
        std::vector<std::pair<Line, std::string>> anchor_lines;    // frame -> comps
        std::vector<std::pair<Line, std::string>> bracket_lines;   // [a,b] = expr
        bool saw_base = false;
        for (const auto& ln : body) {
            auto eq = ln.text.find('=');
            auto words = split_ws(eq == std::string::npos ? ln.text
                                                          : ln.text.substr(0, eq));
            if (words.empty())
                throw ParseError("empty statement", ln.number, 1);
            const std::string& key = words[0];
            if (key == "base") {
                if (saw_base) throw ParseError("duplicate 'base'", ln.number, 1);
                saw_base = true;
                std::string rest = trim(ln.text.substr(4));
                if (!rest.empty())
                    for (auto& c : split_commas(rest)) coords.push_back(trim(c));
            } else if (key == "frame") {
                if (!frame.empty()) throw ParseError("duplicate 'frame'", ln.number, 1);
                std::string rest = trim(ln.text.substr(5));
                for (auto& c : split_commas(rest)) frame.push_back(trim(c));
            } else if (key == "anchor") {
                anchor_lines.push_back({ln, ""});
            } else if (key == "bracket") {
                bracket_lines.push_back({ln, ""});
            } else {
                throw ParseError("unknown key '" + key + "' in algebroid block",
                                 ln.number, 1);
            }
        }
        Chart chart{coords};
        const std::size_t r = frame.size();
        auto frame_index = [&](const std::string& f, int line) {
            for (std::size_t i = 0; i < r; ++i)
                if (frame[i] == f) return i;
            throw ParseError("unknown frame element '" + f + "'", line, 1);
        };

        std::vector<PolyVector> anchor(r, PolyVector::zero(chart));
        for (const auto& [ln, unused] : anchor_lines) {
            auto eq = ln.text.find('=');
            if (eq == std::string::npos)
                throw ParseError("anchor needs '='", ln.number, 1);
            auto words = split_ws(trim(ln.text.substr(6, eq - 6)));
            if (words.size() != 1)
                throw ParseError("anchor key is 'anchor <frame> = components'",
                                 ln.number, 1);
            std::size_t fi = frame_index(words[0], ln.number);
            PolyVector v = parse_vector_expr(trim(ln.text.substr(eq + 1)), chart,
                                             ln.number);
            for (const auto& c : v.components())
                if (c.total_degree() > poly_cap_)
                    throw ParseError("polynomial exceeds the degree cap", ln.number, 1);
            anchor[fi] = v;
        }

        std::vector<std::vector<Section>> structure(
            r, std::vector<Section>(r, Section::zero(chart, r)));
        std::vector<std::vector<bool>> given(r, std::vector<bool>(r, false));
        for (const auto& [ln, unused] : bracket_lines) {
            auto eq = ln.text.find('=');
            if (eq == std::string::npos)
                throw ParseError("bracket needs '='", ln.number, 1);
            std::string lhs = trim(ln.text.substr(7, eq - 7));
            if (lhs.size() < 2 || lhs.front() != '[' || lhs.back() != ']')
                throw ParseError("bracket key is 'bracket [a, b] = section'",
                                 ln.number, 1);
            auto parts = split_commas(lhs.substr(1, lhs.size() - 2));
            if (parts.size() != 2)
                throw ParseError("bracket takes two frame elements", ln.number, 1);
            std::size_t a = frame_index(trim(parts[0]), ln.number);
            std::size_t b = frame_index(trim(parts[1]), ln.number);
            if (a == b)
                throw ParseError("bracket of a frame element with itself is zero",
                                 ln.number, 1);
            if (given[a][b])
                throw ParseError("duplicate bracket", ln.number, 1);
            Section s = parse_section_expr(trim(ln.text.substr(eq + 1)), chart, frame,
                                           ln.number);
            for (const auto& c : s.coefficients)
                if (c.total_degree() > poly_cap_)
                    throw ParseError("polynomial exceeds the degree cap", ln.number, 1);
            structure[a][b] = s;
            structure[b][a] = -s;
            given[a][b] = given[b][a] = true;
        }
        doc.algebroids.emplace(name, std::make_shared<const FrameAlgebroid>(
                                         chart, r, frame, std::move(anchor),
                                         std::move(structure)));
    }

    void parse_connection(SpecDocument& doc, const std::string& name,
                          const std::vector<std::string>& head, int head_line,
                          const std::vector<specdetail::Line>& body) {
        using namespace specdetail;
        if (head.size() != 4)
            throw ParseError("connection block is 'connection NAME ALGEBROID RANK'",
                             head_line, 1);
        auto A = resolve_algebroid(doc, head[2], head_line);
        std::size_t n = 0;
        try {
            n = static_cast<std::size_t>(std::stoul(head[3]));
        } catch (...) {
            throw ParseError("bad bundle rank '" + head[3] + "'", head_line, 1);
        }
        Connection nabla = Connection::zero(A->chart(), A->rank(), n);
        for (const auto& ln : body) {
            auto eq = ln.text.find('=');
            auto words = split_ws(eq == std::string::npos ? ln.text
                                                          : ln.text.substr(0, eq));
            if (words.empty() || words[0] != "christoffel")
                throw ParseError("connection blocks only take 'christoffel' keys",
                                 ln.number, 1);
            if (eq == std::string::npos || words.size() != 2)
                throw ParseError("christoffel key is 'christoffel e[i,j] = expr'",
                                 ln.number, 1);
            std::string fname;
            std::size_t i, j;
            if (!parse_indexed(words[1], fname, i, j))
                throw ParseError("christoffel key is 'christoffel e[i,j] = expr'",
                                 ln.number, 1);
            int fi = -1;
            for (std::size_t a = 0; a < A->rank(); ++a)
                if (A->frame_name(a) == fname) fi = static_cast<int>(a);
            if (fi < 0)
                throw ParseError("unknown frame element '" + fname + "'", ln.number, 1);
            if (i >= n || j >= n)
                throw ParseError("christoffel index out of range", ln.number, 1);
            nabla.gamma(fi).at(i, j) =
                parse_capped(trim(ln.text.substr(eq + 1)), A->chart(), ln.number);
        }
        doc.connections.emplace(
            name, SpecDocument::NamedConnection{head[2], std::move(nabla), n});
    }

    void parse_vb(SpecDocument& doc, const std::string& name,
                  const std::vector<std::string>& head, int head_line,
                  const std::vector<specdetail::Line>& body) {
        if (!body.empty())
            throw ParseError("vb blocks have no body", body[0].number, 1);
        if (head.size() < 3)
            throw ParseError("vb block is 'vb NAME <kind> ...'", head_line, 1);
        const std::string& k = head[2];
        SplitVB vb;
        try {
            if (k == "trivialcore" || k == "fullcore" || k == "gauge") {
                if (head.size() != 5)
                    throw ParseError("vb " + k + " takes ALGEBROID CONNECTION",
                                     head_line, 1);
                auto A = resolve_algebroid(doc, head[3], head_line);
                auto c = doc.connections.find(head[4]);
                if (c == doc.connections.end())
                    throw ParseError("unknown connection '" + head[4] + "'",
                                     head_line, 1);
                if (c->second.algebroid != head[3])
                    throw ParseError("connection '" + head[4] +
                                         "' is over a different algebroid",
                                     head_line, 1);
                if (k == "trivialcore")
                    vb = build_trivial_core(*A, c->second.bundle_rank,
                                            c->second.connection);
                else if (k == "fullcore")
                    vb = build_full_core(*A, c->second.bundle_rank,
                                         c->second.connection);
                else
                    vb = gauge_vb(*A, c->second.connection, c->second.bundle_rank);
            } else if (k == "tangent") {
                if (head.size() != 4)
                    throw ParseError("vb tangent takes ALGEBROID", head_line, 1);
                vb = build_tangent(*resolve_algebroid(doc, head[3], head_line));
            } else if (k == "raw") {
                if (head.size() != 7)
                    throw ParseError("vb raw takes TOTAL BASE SIDE_RANK CORE_RANK",
                                     head_line, 1);
                auto total = resolve_algebroid(doc, head[3], head_line);
                auto base = resolve_algebroid(doc, head[4], head_line);
                std::size_t n = std::stoul(head[5]);
                std::size_t kk = std::stoul(head[6]);
                vb = SplitVB(base, n, kk, total);
            } else {
                throw ParseError("unknown vb kind '" + k + "'", head_line, 1);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(std::string("vb construction failed: ") + e.what(),
                             head_line, 1);
        }
        doc.algebroids.emplace(name + ".total", vb.total_ptr());
        try {
            FatAlgebroid fat = fat_algebroid(vb);
            doc.algebroids.emplace(name + ".fat", fat.algebroid_ptr());
        } catch (const Error&) {
            // raw presentations may fail the axioms; the fat alias is then absent
        }
        doc.vbs.emplace(name, SpecDocument::NamedVB{std::move(vb)});
    }

    void parse_cochain(SpecDocument& doc, const std::string& name,
                       const std::vector<std::string>& head, int head_line,
                       const std::vector<specdetail::Line>& body) {
        using namespace specdetail;
        if (head.size() != 3)
            throw ParseError("cochain block is 'cochain NAME PARENT'", head_line, 1);
        auto parent = resolve_algebroid(doc, head[2], head_line);

        int degree = -1;
        for (const auto& ln : body) {
            auto words = split_ws(ln.text);
            if (!words.empty() && words[0] == "degree") {
                if (words.size() != 2)
                    throw ParseError("degree key is 'degree K'", ln.number, 1);
                degree = std::stoi(words[1]);
            }
        }
        if (degree < 0)
            throw ParseError("cochain block needs a 'degree' key", head_line, 1);
        if (degree > degree_cap_)
            throw ParseError("cochain degree exceeds the cap of " +
                                 std::to_string(degree_cap_),
                             head_line, 1);

        DefCochain c(static_cast<std::size_t>(degree), parent);
        auto frame_tuple = [&](const std::string& inner, int line) {
            std::vector<int> tuple;
            if (!trim(inner).empty())
                for (auto& part : split_commas(inner)) {
                    std::string f = trim(part);
                    int fi = -1;
                    for (std::size_t a = 0; a < parent->rank(); ++a)
                        if (parent->frame_name(a) == f) fi = static_cast<int>(a);
                    if (fi < 0)
                        throw ParseError("unknown frame element '" + f + "'", line, 1);
                    tuple.push_back(fi);
                }
            return tuple;
        };
        for (const auto& ln : body) {
            auto eq = ln.text.find('=');
            auto words = split_ws(eq == std::string::npos ? ln.text
                                                          : ln.text.substr(0, eq));
            if (words.empty()) continue;
            const std::string& key = words[0];
            if (key == "degree") continue;
            if (key != "value" && key != "symbol")
                throw ParseError("unknown key '" + key + "' in cochain block",
                                 ln.number, 1);
            if (eq == std::string::npos)
                throw ParseError(key + " needs '='", ln.number, 1);
            std::string lhs = trim(ln.text.substr(key.size(), eq - key.size()));
            if (lhs.size() < 2 || lhs.front() != '[' || lhs.back() != ']')
                throw ParseError(key + " key is '" + key + " [frames] = ...'",
                                 ln.number, 1);
            auto tuple = frame_tuple(lhs.substr(1, lhs.size() - 2), ln.number);
            std::string rhs = trim(ln.text.substr(eq + 1));
            if (key == "value") {
                if (tuple.size() != static_cast<std::size_t>(degree))
                    throw ParseError("value tuple arity must equal the degree",
                                     ln.number, 1);
                Section s = parse_section_expr(rhs, parent->chart(),
                                               parent->frame_names(), ln.number);
                for (const auto& cc : s.coefficients)
                    if (cc.total_degree() > poly_cap_)
                        throw ParseError("polynomial exceeds the degree cap",
                                         ln.number, 1);
                c.set_frame_value(tuple, std::move(s));
            } else {
                if (degree == 0)
                    throw ParseError("degree-0 cochains have no symbol", ln.number, 1);
                if (tuple.size() != static_cast<std::size_t>(degree) - 1)
                    throw ParseError("symbol tuple arity must be degree - 1",
                                     ln.number, 1);
                c.set_symbol_value(
                    tuple, parse_vector_expr(rhs, parent->chart(), ln.number));
            }
        }
        doc.cochains.emplace(name, std::move(c));
    }

    void parse_triple(SpecDocument& doc, const std::string& name,
                      const std::vector<std::string>& head, int head_line,
                      const std::vector<specdetail::Line>& body) {
        using namespace specdetail;
        if (head.size() != 3)
            throw ParseError("triple block is 'triple NAME VB'", head_line, 1);
        auto vbit = doc.vbs.find(head[2]);
        if (vbit == doc.vbs.end())
            throw ParseError("unknown vb '" + head[2] + "'", head_line, 1);
        const SplitVB& W = vbit->second.vb;
        auto fatit = doc.algebroids.find(head[2] + ".fat");
        if (fatit == doc.algebroids.end())
            throw ParseError("vb '" + head[2] + "' has no fat algebroid", head_line, 1);
        const FrameAlgebroid& fat = *fatit->second;
        const Chart& base = W.base().chart();

        PolyVector X = PolyVector::zero(base);
        PolyVector Xside = X, Xcore = X;
        bool side_override = false, core_override = false;
        PolyMatrix U(base, fat.rank(), fat.rank());
        PolyMatrix V(base, W.n(), W.n());
        PolyMatrix C(base, W.k(), W.k());
        for (const auto& ln : body) {
            auto eq = ln.text.find('=');
            if (eq == std::string::npos)
                throw ParseError("triple statements need '='", ln.number, 1);
            auto words = split_ws(ln.text.substr(0, eq));
            if (words.empty())
                throw ParseError("empty statement", ln.number, 1);
            std::string rhs = trim(ln.text.substr(eq + 1));
            if (words[0] == "X") {
                X = parse_vector_expr(rhs, base, ln.number);
            } else if (words[0] == "symbol") {
                // optional per-leg symbol override: symbol [side] / symbol [core]
                std::string lhs = trim(ln.text.substr(6, eq - 6));
                if (lhs == "[side]") {
                    Xside = parse_vector_expr(rhs, base, ln.number);
                    side_override = true;
                } else if (lhs == "[core]") {
                    Xcore = parse_vector_expr(rhs, base, ln.number);
                    core_override = true;
                } else {
                    throw ParseError("triple symbol key is 'symbol [side]' or "
                                     "'symbol [core]'",
                                     ln.number, 1);
                }
            } else if (words[0] == "value") {
                std::string lhs = trim(ln.text.substr(5, eq - 5));
                if (lhs.size() < 2 || lhs.front() != '[' || lhs.back() != ']')
                    throw ParseError("value key is 'value [core] = section'",
                                     ln.number, 1);
                std::string f = trim(lhs.substr(1, lhs.size() - 2));
                int B = -1;
                std::vector<std::string> core_names;
                for (std::size_t b = 0; b < W.k(); ++b)
                    core_names.push_back(W.total().frame_name(W.r() + b));
                for (std::size_t b = 0; b < W.k(); ++b)
                    if (core_names[b] == f) B = static_cast<int>(b);
                if (B < 0)
                    throw ParseError("unknown core frame element '" + f + "'",
                                     ln.number, 1);
                Section s = parse_section_expr(rhs, base, core_names, ln.number);
                for (std::size_t bb = 0; bb < W.k(); ++bb)
                    C.at(bb, B) = s.coefficients[bb];
            } else {
                std::string mname;
                std::size_t i, j;
                if (!parse_indexed(words[0], mname, i, j))
                    throw ParseError("unknown key in triple block", ln.number, 1);
                Polynomial p = parse_capped(rhs, base, ln.number);
                if (mname == "U") {
                    if (i >= fat.rank() || j >= fat.rank())
                        throw ParseError("U index out of range", ln.number, 1);
                    U.at(i, j) = p;
                } else if (mname == "V") {
                    if (i >= W.n() || j >= W.n())
                        throw ParseError("V index out of range", ln.number, 1);
                    V.at(i, j) = p;
                } else {
                    throw ParseError("unknown key '" + mname + "' in triple block",
                                     ln.number, 1);
                }
            }
        }
        IMTriple t{BundleDerivation(X, U),
                   BundleDerivation(side_override ? Xside : X, V),
                   BundleDerivation(core_override ? Xcore : X, C)};
        doc.triples.emplace(name, SpecDocument::NamedTriple{head[2], std::move(t)});
    }

    void parse_imsection(SpecDocument& doc, const std::string& name,
                         const std::vector<std::string>& head, int head_line,
                         const std::vector<specdetail::Line>& body) {
        using namespace specdetail;
        if (head.size() != 4)
            throw ParseError("imsection block is 'imsection NAME ALGEBROID CONNECTION'",
                             head_line, 1);
        auto A = resolve_algebroid(doc, head[2], head_line);
        auto c = doc.connections.find(head[3]);
        if (c == doc.connections.end())
            throw ParseError("unknown connection '" + head[3] + "'", head_line, 1);
        if (c->second.algebroid != head[2])
            throw ParseError("connection is over a different algebroid", head_line, 1);
        const Chart& base = A->chart();
        const std::size_t n = c->second.bundle_rank;
        IMSectionCoords coords{PolyVector::zero(base),
                               PolyMatrix(base, A->rank(), A->rank()),
                               PolyMatrix(base, n, n)};
        for (const auto& ln : body) {
            auto eq = ln.text.find('=');
            if (eq == std::string::npos)
                throw ParseError("imsection statements need '='", ln.number, 1);
            auto words = split_ws(ln.text.substr(0, eq));
            std::string rhs = trim(ln.text.substr(eq + 1));
            if (!words.empty() && words[0] == "X") {
                coords.X = parse_vector_expr(rhs, base, ln.number);
                continue;
            }
            std::string mname;
            std::size_t i, j;
            if (words.empty() || !parse_indexed(words[0], mname, i, j))
                throw ParseError("unknown key in imsection block", ln.number, 1);
            Polynomial p = parse_capped(rhs, base, ln.number);
            if (mname == "U") {
                if (i >= A->rank() || j >= A->rank())
                    throw ParseError("U index out of range", ln.number, 1);
                coords.U.at(i, j) = p;
            } else if (mname == "V") {
                if (i >= n || j >= n)
                    throw ParseError("V index out of range", ln.number, 1);
                coords.V.at(i, j) = p;
            } else {
                throw ParseError("unknown key '" + mname + "' in imsection block",
                                 ln.number, 1);
            }
        }
        doc.imsections.emplace(
            name, SpecDocument::NamedIMSection{head[2], head[3], std::move(coords)});
    }

    unsigned poly_cap_;
    int degree_cap_;
};

}  // namespace vbcalc
