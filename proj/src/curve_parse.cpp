#include <array>
#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>

#include "periodica/curve.hpp"
#include "periodica/error.hpp"

namespace periodica {

namespace {

// Sparse polynomial in (t, x, y) used only during parsing; key = exponents.
using Mono3 = std::array<int, 3>;
using Poly3 = std::map<Mono3, mpq_class>;

void p3_add_term(Poly3& p, const Mono3& m, const mpq_class& c) {
    if (c == 0) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

Poly3 p3_add(const Poly3& a, const Poly3& b) {
    Poly3 out = a;
    for (const auto& [m, c] : b) p3_add_term(out, m, c);
    return out;
}

Poly3 p3_neg(const Poly3& a) {
    Poly3 out;
    for (const auto& [m, c] : a) out.emplace(m, -c);
    return out;
}

Poly3 p3_mul(const Poly3& a, const Poly3& b) {
    Poly3 out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b)
            p3_add_term(out, {ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]}, ca * cb);
    return out;
}

struct Tok {
    enum Kind { num, ident, op, end } kind = end;
    std::string text;
    size_t pos = 0;
};

class Lexer {
  public:
    Lexer(const std::string& s, std::string field_var) : s_(s), var_(std::move(field_var)) { advance(); }

    const Tok& peek() const { return tok_; }
    Tok take() {
        Tok t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_.pos = pos_;
        if (pos_ >= s_.size()) {
            tok_ = {Tok::end, "", pos_};
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
                ++pos_;
            tok_ = {Tok::num, s_.substr(start, pos_ - start), start};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            // A declared multi-letter field generator wins over letter-by-letter.
            if (var_.size() > 1 && s_.compare(pos_, var_.size(), var_) == 0) {
                tok_ = {Tok::ident, var_, pos_};
                pos_ += var_.size();
                return;
            }
            tok_ = {Tok::ident, std::string(1, c), pos_};
            ++pos_;
            return;
        }
        static const std::string ops = "+-*/^()=;:";
        if (ops.find(c) != std::string::npos) {
            tok_ = {Tok::op, std::string(1, c), pos_};
            ++pos_;
            return;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "' at offset " +
                         std::to_string(pos_));
    }

    const std::string& s_;
    std::string var_;
    size_t pos_ = 0;
    Tok tok_;
};

// Recursive-descent parser producing a Poly3.  The field is needed so that
// division by a generator expression can be resolved as a field inverse.
class PolyParser {
  public:
    PolyParser(Lexer& lex, const NumberField& K, const std::string& var, bool allow_xy)
        : lex_(lex), K_(K), var_(var), allow_xy_(allow_xy) {}

    Poly3 expr() {
        Poly3 acc;
        bool neg = false;
        if (lex_.peek().kind == Tok::op && (lex_.peek().text == "+" || lex_.peek().text == "-"))
            neg = lex_.take().text == "-";
        acc = term();
        if (neg) acc = p3_neg(acc);
        while (lex_.peek().kind == Tok::op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            bool minus = lex_.take().text == "-";
            Poly3 t = term();
            acc = p3_add(acc, minus ? p3_neg(t) : t);
        }
        return acc;
    }

  private:
    bool starts_factor() const {
        const Tok& t = lex_.peek();
        if (t.kind == Tok::num || t.kind == Tok::ident) return true;
        return t.kind == Tok::op && t.text == "(";
    }

    Poly3 term() {
        Poly3 acc = factor();
        for (;;) {
            if (lex_.peek().kind == Tok::op && lex_.peek().text == "*") {
                lex_.take();
                acc = p3_mul(acc, factor());
            } else if (lex_.peek().kind == Tok::op && lex_.peek().text == "/") {
                lex_.take();
                acc = p3_mul(acc, invert(factor()));
            } else if (starts_factor()) {
                acc = p3_mul(acc, factor());
            } else {
                return acc;
            }
        }
    }

    Poly3 factor() {
        bool neg = false;
        while (lex_.peek().kind == Tok::op &&
               (lex_.peek().text == "+" || lex_.peek().text == "-"))
            if (lex_.take().text == "-") neg = !neg;
        Poly3 b = base();
        if (lex_.peek().kind == Tok::op && lex_.peek().text == "^") {
            lex_.take();
            Tok e = lex_.take();
            if (e.kind != Tok::num || e.text.find('.') != std::string::npos)
                throw ParseError("exponent must be a nonnegative integer at offset " +
                                 std::to_string(e.pos));
            long n = std::strtol(e.text.c_str(), nullptr, 10);
            if (n < 0 || n > 1000) throw ParseError("exponent out of range");
            Poly3 acc;
            acc.emplace(Mono3{0, 0, 0}, mpq_class(1));
            for (long i = 0; i < n; ++i) acc = p3_mul(acc, b);
            b = std::move(acc);
        }
        return neg ? p3_neg(b) : b;
    }

    Poly3 base() {
        Tok t = lex_.take();
        if (t.kind == Tok::num) {
            if (t.text.find('.') != std::string::npos)
                throw ParseError("decimal literals are only allowed in the embedding clause "
                                 "(offset " + std::to_string(t.pos) + ")");
            Poly3 p;
            p.emplace(Mono3{0, 0, 0}, mpq_class(mpz_class(t.text)));
            return p;
        }
        if (t.kind == Tok::ident) {
            Poly3 p;
            if (t.text == var_ && !K_.is_rational()) {
                p.emplace(Mono3{1, 0, 0}, mpq_class(1));
            } else if (allow_xy_ && t.text == "x") {
                p.emplace(Mono3{0, 1, 0}, mpq_class(1));
            } else if (allow_xy_ && t.text == "y") {
                p.emplace(Mono3{0, 0, 1}, mpq_class(1));
            } else {
                throw ParseError("unknown variable '" + t.text + "' at offset " +
                                 std::to_string(t.pos));
            }
            return p;
        }
        if (t.kind == Tok::op && t.text == "(") {
            Poly3 p = expr();
            Tok close = lex_.take();
            if (close.kind != Tok::op || close.text != ")")
                throw ParseError("expected ')' at offset " + std::to_string(close.pos));
            return p;
        }
        throw ParseError("expected a number, variable, or '(' at offset " + std::to_string(t.pos));
    }

    // Division is restricted to divisors free of x and y; those live in the
    // coefficient field and can be inverted exactly.
    Poly3 invert(const Poly3& d) {
        KElem e = K_.zero();
        for (const auto& [m, c] : d) {
            if (m[1] != 0 || m[2] != 0) throw ParseError("division by a polynomial in x or y");
            KElem tp = K_.one();
            for (int k = 0; k < m[0]; ++k) tp = K_.mul(tp, K_.gen());
            e = K_.add(e, K_.mul_q(tp, c));
        }
        if (K_.is_zero(e)) throw ParseError("division by zero");
        KElem inv;
        try {
            inv = K_.inv(e);
        } catch (const InternalError&) {
            throw ParseError("division by a non-invertible field expression");
        }
        Poly3 out;
        for (size_t k = 0; k < inv.size(); ++k)
            if (inv[k] != 0) out.emplace(Mono3{static_cast<int>(k), 0, 0}, inv[k]);
        return out;
    }

    Lexer& lex_;
    const NumberField& K_;
    std::string var_;
    bool allow_xy_;
};

// Fold t-powers down into KElem coefficients on x^i y^j.
std::vector<KPoly> reduce3(const NumberField& K, const Poly3& p) {
    int max_t = 0, max_y = 0;
    for (const auto& [m, c] : p) {
        max_t = std::max(max_t, m[0]);
        max_y = std::max(max_y, m[2]);
    }
    std::vector<KElem> tpow(static_cast<size_t>(max_t) + 1, K.one());
    for (int k = 1; k <= max_t; ++k)
        tpow[static_cast<size_t>(k)] = K.mul(tpow[static_cast<size_t>(k - 1)], K.gen());

    std::vector<KPoly> out(static_cast<size_t>(max_y) + 1);
    for (const auto& [m, c] : p) {
        KPoly& row = out[static_cast<size_t>(m[2])];
        if (static_cast<int>(row.size()) <= m[1]) row.resize(static_cast<size_t>(m[1]) + 1, K.zero());
        row[static_cast<size_t>(m[1])] =
            K.add(row[static_cast<size_t>(m[1])], K.mul_q(tpow[static_cast<size_t>(m[0])], c));
    }
    for (KPoly& row : out) kpoly_trim(K, row);
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

size_t skip_ws(const std::string& s, size_t pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos;
}

bool match_word(const std::string& s, size_t& pos, const char* word) {
    size_t p = skip_ws(s, pos);
    size_t n = std::string(word).size();
    if (s.compare(p, n, word) != 0) return false;
    if (p + n < s.size() && std::isalnum(static_cast<unsigned char>(s[p + n]))) return false;
    pos = p + n;
    return true;
}

// Decimal complex literal: "a", "bi", "a+bi", "a-bi" with plain decimal parts.
void parse_embedding(const std::string& s, double& re, double& im) {
    re = 0.0;
    im = 0.0;
    size_t pos = 0;
    auto bad = [&]() -> ParseError { return ParseError("bad embedding literal '" + s + "'"); };
    auto read_part = [&](bool& is_imag) -> double {
        pos = skip_ws(s, pos);
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        while (pos < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
            ++pos;
        std::string numtext = s.substr(start, pos - start);
        pos = skip_ws(s, pos);
        is_imag = pos < s.size() && s[pos] == 'i';
        if (is_imag) ++pos;
        if (numtext.empty() || numtext == "+" || numtext == "-") {
            // bare "i" / "+i" / "-i"
            if (!is_imag) throw bad();
            return numtext == "-" ? -1.0 : 1.0;
        }
        char* end = nullptr;
        double v = std::strtod(numtext.c_str(), &end);
        if (end == nullptr || *end != '\0') throw bad();
        return v;
    };
    bool imag = false;
    double first = read_part(imag);
    (imag ? im : re) = first;
    pos = skip_ws(s, pos);
    if (pos < s.size()) {
        if (imag || (s[pos] != '+' && s[pos] != '-')) throw bad();
        bool imag2 = false;
        im = read_part(imag2);
        if (!imag2) throw bad();
        pos = skip_ws(s, pos);
    }
    if (pos != s.size()) throw bad();
}

Poly3 parse_poly_text(const std::string& text, const NumberField& K, const std::string& var,
                      bool allow_xy) {
    Lexer lex(text, var);
    PolyParser pp(lex, K, var, allow_xy);
    Poly3 p = pp.expr();
    if (lex.peek().kind == Tok::op && lex.peek().text == "=") {
        lex.take();
        p = p3_add(p, p3_neg(pp.expr()));
    }
    if (lex.peek().kind == Tok::op && lex.peek().text == ";") lex.take();
    if (lex.peek().kind != Tok::end)
        throw ParseError("unexpected trailing input at offset " + std::to_string(lex.peek().pos));
    return p;
}

}  // namespace

PlaneCurve parse_curve(const std::string& text) {
    size_t pos = 0;
    FieldPtr field = NumberField::rationals();
    std::string body = text;
    if (match_word(text, pos, "field")) {
        pos = skip_ws(text, pos);
        size_t vstart = pos;
        while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string var = text.substr(vstart, pos - vstart);
        if (var.empty() || !std::isalpha(static_cast<unsigned char>(var[0])))
            throw ParseError("expected a field generator name after 'field'");
        if (var == "x" || var == "y")
            throw ParseError("field generator must not be named x or y");
        pos = skip_ws(text, pos);
        if (pos >= text.size() || text[pos] != ':') throw ParseError("expected ':' after field generator");
        ++pos;
        size_t semi = text.find(';', pos);
        if (semi == std::string::npos) throw ParseError("expected ';' after field polynomial");
        std::string minpoly_text = text.substr(pos, semi - pos);
        pos = semi + 1;

        // Parse the minimal polynomial in var alone, over Q.
        FieldPtr q = NumberField::rationals();
        Lexer lex(minpoly_text, var);
        // Within the minpoly the generator is the only variable; map it to the
        // t slot by parsing against a placeholder field of degree >= 2.
        Poly3 mp;
        {
            // Use a temporary field whose var matches so the ident resolves.
            QPoly placeholder;  // t^2 placeholder, only the var name matters
            placeholder.c = {mpq_class(0), mpq_class(0), mpq_class(1)};
            auto tmp = NumberField::make(placeholder, var, 0.0, 0.0);
            PolyParser pp(lex, *tmp, var, false);
            mp = pp.expr();
            if (lex.peek().kind != Tok::end)
                throw ParseError("unexpected input in field polynomial");
        }
        QPoly minpoly;
        for (const auto& [m, c] : mp) {
            if (m[1] != 0 || m[2] != 0) throw InternalError("x,y leaked into field polynomial");
            if (static_cast<int>(minpoly.c.size()) <= m[0])
                minpoly.c.resize(static_cast<size_t>(m[0]) + 1, mpq_class(0));
            minpoly.c[static_cast<size_t>(m[0])] = c;
        }
        minpoly.trim();
        if (minpoly.degree() < 1) throw ParseError("field polynomial must be nonconstant");
        // normalize monic
        mpq_class lead = minpoly.lead();
        for (auto& co : minpoly.c) co /= lead;

        if (!match_word(text, pos, "embedding"))
            throw ParseError("expected 'embedding' after field declaration");
        size_t semi2 = text.find(';', pos);
        if (semi2 == std::string::npos) throw ParseError("expected ';' after embedding");
        double hre = 0.0, him = 0.0;
        parse_embedding(text.substr(pos, semi2 - pos), hre, him);
        pos = semi2 + 1;

        field = NumberField::make(minpoly, var, hre, him);
        body = text.substr(pos);
    }

    PlaneCurve c;
    c.field = field;
    c.source = text;
    Poly3 p = parse_poly_text(body, *field, field->var, true);
    c.ycoeff = reduce3(*field, p);
    if (c.ycoeff.empty()) throw ParseError("curve polynomial is zero");
    if (c.degy() < 1) throw ParseError("curve must involve y");
    return c;
}

std::vector<KPoly> parse_bivariate(const std::string& text, const FieldPtr& field) {
    Poly3 p = parse_poly_text(text, *field, field->var, true);
    return reduce3(*field, p);
}

std::string bivariate_str(const NumberField& K, const std::vector<KPoly>& p) {
    std::ostringstream os;
    bool first = true;
    for (size_t j = p.size(); j-- > 0;) {
        const KPoly& row = p[j];
        for (size_t i = row.size(); i-- > 0;) {
            const KElem& e = row[i];
            if (K.is_zero(e)) continue;
            std::string cs = K.elem_str(e);
            // "simple" = a bare rational, possibly negative; compound field
            // elements keep their own sign inside parentheses.
            bool compound = cs.find_first_of("+ ") != std::string::npos ||
                            cs.find('-', 1) != std::string::npos;
            bool negative = !compound && !cs.empty() && cs[0] == '-';
            if (negative) cs = cs.substr(1);
            bool has_var = i > 0 || j > 0;
            if (first)
                os << (negative ? "-" : "");
            else
                os << (negative ? " - " : " + ");
            first = false;
            if (!has_var) {
                os << (compound ? "(" + cs + ")" : cs);
            } else if (compound) {
                os << "(" << cs << ")*";
            } else if (cs != "1") {
                os << cs << "*";
            }
            if (i > 0) {
                os << "x";
                if (i > 1) os << "^" << i;
                if (j > 0) os << "*";
            }
            if (j > 0) {
                os << "y";
                if (j > 1) os << "^" << j;
            }
        }
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace periodica
