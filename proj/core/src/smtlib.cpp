#include "seqpack/smtlib.hpp"

#include "seqpack/errors.hpp"

#include <cctype>
#include <sstream>

namespace seqpack {

namespace {

void print_numeral(std::ostream& os, const Rational& r) {
    Integer p = numerator(r), q = denominator(r);
    bool neg = p < 0;
    if (neg) p = -p;
    std::string body = q == 1 ? p.str() : "(/ " + p.str() + " " + q.str() + ")";
    if (neg)
        os << "(- " << body << ")";
    else
        os << body;
}

void print_atom(std::ostream& os, const LinIneq& atom) {
    os << (atom.strict ? "(< " : "(<= ");
    if (atom.coeffs.size() > 1) os << "(+ ";
    bool first = true;
    for (const auto& [v, c] : atom.coeffs) {
        if (!first) os << " ";
        first = false;
        if (c == 1) {
            os << var_name(v);
        } else {
            os << "(* ";
            print_numeral(os, c);
            os << " " << var_name(v) << ")";
        }
    }
    if (atom.coeffs.size() > 1) os << ")";
    os << " ";
    print_numeral(os, atom.bound);
    os << ")";
}

} // namespace

std::string emit_smtlib(const Formula& f) {
    std::ostringstream os;
    os << "(set-logic QF_LRA)\n";
    for (const VarId& v : f.variables()) os << "(declare-fun " << var_name(v) << " () Real)\n";
    for (const Clause& c : f.clauses()) {
        os << "(assert ";
        if (c.disjuncts.size() > 1) os << "(or ";
        bool first = true;
        for (const LinIneq& d : c.disjuncts) {
            if (!first) os << " ";
            first = false;
            print_atom(os, d);
        }
        if (c.disjuncts.size() > 1) os << ")";
        os << ")\n";
    }
    os << "(check-sat)\n(get-model)\n";
    return os.str();
}

namespace {

struct Sexp {
    std::string atom; // empty for lists
    std::vector<Sexp> kids;
    bool is_atom = false;
};

struct Tokenizer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size()) {
            char c = text[pos];
            if (c == ';') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    std::string fragment() const {
        return std::string(text.substr(pos, std::min<std::size_t>(40, text.size() - pos)));
    }

    bool eof() {
        skip_space();
        return pos >= text.size();
    }

    std::string next_token() {
        skip_space();
        if (pos >= text.size()) throw ParseError("unexpected end of input");
        char c = text[pos];
        if (c == '(' || c == ')') {
            ++pos;
            return std::string(1, c);
        }
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')' && text[pos] != ';')
            ++pos;
        return std::string(text.substr(start, pos - start));
    }
};

Sexp parse_sexp(Tokenizer& tk) {
    std::string tok = tk.next_token();
    if (tok == ")") throw ParseError("unexpected ')' near '" + tk.fragment() + "'");
    if (tok != "(") return Sexp{std::move(tok), {}, true};
    Sexp list;
    for (;;) {
        tk.skip_space();
        if (tk.pos >= tk.text.size()) throw ParseError("unbalanced '('");
        if (tk.text[tk.pos] == ')') {
            ++tk.pos;
            return list;
        }
        list.kids.push_back(parse_sexp(tk));
    }
}

std::string dump_sexp(const Sexp& s) {
    if (s.is_atom) return s.atom;
    std::string out = "(";
    for (std::size_t i = 0; i < s.kids.size(); ++i) {
        if (i) out += " ";
        out += dump_sexp(s.kids[i]);
    }
    return out + ")";
}

bool is_integer_numeral(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

bool is_decimal_numeral(const std::string& s) {
    bool dot = false, digit = false;
    for (char c : s) {
        if (c == '.') {
            if (dot) return false;
            dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digit = true;
        } else {
            return false;
        }
    }
    return dot && digit;
}

Rational parse_value(const Sexp& s) {
    if (s.is_atom) {
        if (is_integer_numeral(s.atom)) return Rational(Integer(s.atom));
        if (is_decimal_numeral(s.atom)) return rational_from_decimal(s.atom);
        throw ParseError("unsupported model value '" + s.atom + "'");
    }
    if (!s.kids.empty() && s.kids[0].is_atom) {
        const std::string& op = s.kids[0].atom;
        if (op == "-" && s.kids.size() == 2) return -parse_value(s.kids[1]);
        if (op == "/" && s.kids.size() == 3) {
            Rational den = parse_value(s.kids[2]);
            if (den == 0) throw ParseError("division by zero in model value");
            return parse_value(s.kids[1]) / den;
        }
    }
    throw ParseError("unsupported model value '" + dump_sexp(s) + "'");
}

} // namespace

Assignment parse_model(std::string_view text) {
    Tokenizer tk{text};
    Sexp root = parse_sexp(tk);
    if (root.is_atom) throw ParseError("model response must be a parenthesized list");
    // Accept ((define-fun ...) ...) and (model (define-fun ...) ...).
    std::size_t first = 0;
    if (!root.kids.empty() && root.kids[0].is_atom && root.kids[0].atom == "model") first = 1;
    Assignment out;
    for (std::size_t i = first; i < root.kids.size(); ++i) {
        const Sexp& def = root.kids[i];
        if (def.is_atom || def.kids.size() != 5 || !def.kids[0].is_atom || def.kids[0].atom != "define-fun")
            throw ParseError("expected define-fun entry, got '" + dump_sexp(def) + "'");
        if (!def.kids[1].is_atom || def.kids[2].is_atom || !def.kids[2].kids.empty() ||
            !def.kids[3].is_atom || def.kids[3].atom != "Real")
            throw ParseError("unsupported define-fun shape '" + dump_sexp(def) + "'");
        auto var = var_from_name(def.kids[1].atom);
        if (!var) continue; // solvers may define auxiliary symbols
        out[*var] = parse_value(def.kids[4]);
    }
    return out;
}

SolveResult parse_solver_output(std::string_view text) {
    Tokenizer tk{text};
    if (tk.eof()) throw BackendError("external solver produced no output");
    std::string verdict = tk.next_token();
    if (verdict == "unsat") return {SolveStatus::Unsat, std::nullopt};
    if (verdict == "unknown" || verdict == "timeout") return {SolveStatus::Timeout, std::nullopt};
    if (verdict != "sat") throw BackendError("unrecognized solver verdict '" + verdict + "'");
    if (tk.eof()) throw BackendError("sat verdict without a model");
    try {
        Assignment model = parse_model(text.substr(tk.pos));
        return {SolveStatus::Sat, std::move(model)};
    } catch (const ParseError& e) {
        throw BackendError(std::string("cannot parse model: ") + e.what());
    }
}

namespace {

// --- Restricted QF_LRA script parser (exactly the emitter's grammar) ---

Rational parse_coeff(const Sexp& s) {
    if (s.is_atom) {
        if (is_integer_numeral(s.atom)) return Rational(Integer(s.atom));
        throw ParseError("expected numeral, got '" + s.atom + "'");
    }
    if (!s.kids.empty() && s.kids[0].is_atom) {
        const std::string& op = s.kids[0].atom;
        if (op == "-" && s.kids.size() == 2) return -parse_coeff(s.kids[1]);
        if (op == "/" && s.kids.size() == 3) return parse_coeff(s.kids[1]) / parse_coeff(s.kids[2]);
    }
    throw ParseError("expected numeral, got '" + dump_sexp(s) + "'");
}

void parse_term(const Sexp& s, std::map<VarId, Rational>& coeffs) {
    if (s.is_atom) {
        auto v = var_from_name(s.atom);
        if (!v) throw ParseError("unknown variable '" + s.atom + "'");
        coeffs[*v] += 1;
        return;
    }
    if (s.kids.size() == 3 && s.kids[0].is_atom && s.kids[0].atom == "*" && s.kids[2].is_atom) {
        auto v = var_from_name(s.kids[2].atom);
        if (!v) throw ParseError("unknown variable '" + s.kids[2].atom + "'");
        coeffs[*v] += parse_coeff(s.kids[1]);
        return;
    }
    throw ParseError("expected term, got '" + dump_sexp(s) + "'");
}

LinIneq parse_atom_sexp(const Sexp& s) {
    if (s.is_atom || s.kids.size() != 3 || !s.kids[0].is_atom)
        throw ParseError("expected atom, got '" + dump_sexp(s) + "'");
    const std::string& rel = s.kids[0].atom;
    if (rel != "<" && rel != "<=") throw ParseError("unsupported relation '" + rel + "'");
    LinIneq atom;
    atom.strict = rel == "<";
    const Sexp& lhs = s.kids[1];
    if (!lhs.is_atom && !lhs.kids.empty() && lhs.kids[0].is_atom && lhs.kids[0].atom == "+") {
        for (std::size_t i = 1; i < lhs.kids.size(); ++i) parse_term(lhs.kids[i], atom.coeffs);
    } else {
        parse_term(lhs, atom.coeffs);
    }
    atom.bound = parse_coeff(s.kids[2]);
    std::erase_if(atom.coeffs, [](const auto& kv) { return kv.second == 0; });
    if (atom.coeffs.empty()) throw ParseError("atom without variables: '" + dump_sexp(s) + "'");
    return atom;
}

} // namespace

std::string smtlib_numeral(const Rational& r) {
    std::ostringstream os;
    print_numeral(os, r);
    return os.str();
}

std::string model_to_smtlib(const Assignment& model) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (const auto& [v, value] : model) {
        if (!first) os << "\n ";
        first = false;
        os << "(define-fun " << var_name(v) << " () Real " << smtlib_numeral(value) << ")";
    }
    os << ")\n";
    return os.str();
}

Formula parse_smtlib(std::string_view text) {
    Tokenizer tk{text};
    Formula f;
    while (!tk.eof()) {
        Sexp cmd = parse_sexp(tk);
        if (cmd.is_atom || cmd.kids.empty() || !cmd.kids[0].is_atom)
            throw ParseError("expected command, got '" + dump_sexp(cmd) + "'");
        const std::string& head = cmd.kids[0].atom;
        if (head == "set-logic" || head == "check-sat" || head == "get-model" || head == "exit" ||
            head == "set-option" || head == "set-info")
            continue;
        if (head == "declare-fun") {
            if (cmd.kids.size() != 4 || !cmd.kids[1].is_atom || !cmd.kids[3].is_atom ||
                cmd.kids[3].atom != "Real" || cmd.kids[2].is_atom || !cmd.kids[2].kids.empty())
                throw ParseError("unsupported declaration '" + dump_sexp(cmd) + "'");
            auto v = var_from_name(cmd.kids[1].atom);
            if (!v) throw ParseError("unsupported variable name '" + cmd.kids[1].atom + "'");
            f.declare(*v);
            continue;
        }
        if (head == "assert") {
            if (cmd.kids.size() != 2) throw ParseError("malformed assert '" + dump_sexp(cmd) + "'");
            const Sexp& body = cmd.kids[1];
            std::vector<LinIneq> disjuncts;
            if (!body.is_atom && !body.kids.empty() && body.kids[0].is_atom && body.kids[0].atom == "or") {
                for (std::size_t i = 1; i < body.kids.size(); ++i)
                    disjuncts.push_back(parse_atom_sexp(body.kids[i]));
            } else {
                disjuncts.push_back(parse_atom_sexp(body));
            }
            f.add(Clause(std::move(disjuncts)));
            continue;
        }
        throw ParseError("unsupported command '" + head + "'");
    }
    return f;
}

} // namespace seqpack
