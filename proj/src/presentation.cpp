#include "fqlab/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

namespace fqlab::fp {

Word free_reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (const Letter& l : w) {
        if (!out.empty() && out.back() == l.inverted())
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

Word inverse(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverted());
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return free_reduce(out);
}

Word power(const Word& w, long long e) {
    const Word base = e < 0 ? inverse(w) : w;
    Word out;
    for (long long i = 0; i < (e < 0 ? -e : e); ++i) out.insert(out.end(), base.begin(), base.end());
    return free_reduce(out);
}

Word commutator(const Word& u, const Word& v) {
    return concat(concat(inverse(u), inverse(v)), concat(u, v));
}

std::vector<long long> exponent_sums(const Word& w, std::size_t generator_count) {
    std::vector<long long> sums(generator_count, 0);
    for (const Letter& l : w) sums.at(l.gen) += l.inverse ? -1 : 1;
    return sums;
}

namespace {

bool valid_name(const std::string& name) {
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    return std::all_of(name.begin(), name.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

} // namespace

Presentation::Presentation(std::vector<std::string> generator_names, std::vector<Word> relators)
    : names_(std::move(generator_names)) {
    if (names_.empty()) throw std::invalid_argument("a presentation needs at least one generator");
    std::set<std::string> seen;
    for (const auto& name : names_) {
        if (!valid_name(name) || name == "gens" || name == "rels")
            throw std::invalid_argument("invalid generator name '" + name + "'");
        if (!seen.insert(name).second) throw std::invalid_argument("duplicate generator name '" + name + "'");
    }
    for (const Word& r : relators) {
        for (const Letter& l : r)
            if (l.gen >= names_.size()) throw std::invalid_argument("relator uses an undeclared generator");
        Word reduced = free_reduce(r);
        if (!reduced.empty()) relators_.push_back(std::move(reduced));
    }
}

std::string Presentation::word_to_string(const Word& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        const long long run = static_cast<long long>(j - i) * (w[i].inverse ? -1 : 1);
        if (!out.empty()) out += ' ';
        out += names_[w[i].gen];
        if (run != 1) out += "^" + std::to_string(run);
        i = j;
    }
    return out;
}

std::string Presentation::to_string() const {
    std::string out = "gens:";
    for (const auto& name : names_) out += " " + name;
    out += "\nrels:";
    for (std::size_t i = 0; i < relators_.size(); ++i) out += (i == 0 ? " " : ", ") + word_to_string(relators_[i]);
    out += "\n";
    return out;
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { ident, integer, symbol, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t i = 0;
    auto advance = [&] {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++i;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance();
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        Token t{Tok::symbol, "", line, column};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::ident;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
                t.text += text[i];
                advance();
            }
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Tok::integer;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                t.text += text[i];
                advance();
            }
        } else if (std::string_view("^+-()[],=:").find(c) != std::string_view::npos) {
            t.text = std::string(1, c);
            advance();
        } else {
            throw ParseError(line, column, std::string("unexpected character '") + c + "'");
        }
        tokens.push_back(std::move(t));
    }
    tokens.push_back({Tok::end, "", line, column});
    return tokens;
}

class Parser {
  public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Presentation parse() {
        expect_keyword("gens");
        while (peek().kind == Tok::ident && !is_keyword_at(pos_)) {
            const Token& t = next();
            if (std::find(names_.begin(), names_.end(), t.text) != names_.end())
                throw ParseError(t.line, t.column, "duplicate generator '" + t.text + "'");
            names_.push_back(t.text);
        }
        if (names_.empty()) throw ParseError(peek().line, peek().column, "expected at least one generator name");
        std::vector<Word> relators;
        if (peek().kind != Tok::end) {
            expect_keyword("rels");
            if (peek().kind != Tok::end) {
                relators.push_back(relator());
                while (accept(",")) relators.push_back(relator());
            }
        }
        if (peek().kind != Tok::end) fail(peek(), "unexpected '" + peek().text + "'");
        try {
            return Presentation(names_, std::move(relators));
        } catch (const std::invalid_argument& e) {
            throw ParseError(1, 1, e.what());
        }
    }

  private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }
    [[noreturn]] static void fail(const Token& t, const std::string& message) {
        throw ParseError(t.line, t.column, message);
    }
    bool accept(std::string_view symbol) {
        if (peek().kind == Tok::symbol && peek().text == symbol) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(std::string_view symbol) {
        if (!accept(symbol)) fail(peek(), "expected '" + std::string(symbol) + "'");
    }
    bool is_keyword_at(std::size_t i) const {
        return tokens_[i].kind == Tok::ident && (tokens_[i].text == "gens" || tokens_[i].text == "rels") &&
               tokens_[i + 1].kind == Tok::symbol && tokens_[i + 1].text == ":";
    }
    void expect_keyword(const std::string& keyword) {
        if (peek().kind != Tok::ident || peek().text != keyword) fail(peek(), "expected '" + keyword + ":'");
        ++pos_;
        expect(":");
    }

    bool starts_term() const {
        const Token& t = peek();
        return t.kind == Tok::ident || (t.kind == Tok::symbol && (t.text == "(" || t.text == "["));
    }

    Word relator() {
        if (!starts_term()) fail(peek(), "expected a relator");
        Word left = word();
        if (accept("=")) {
            Word right = word();
            return concat(left, inverse(right));
        }
        return left;
    }

    Word word() {
        Word w;
        while (starts_term()) {
            Word t = term();
            w.insert(w.end(), t.begin(), t.end());
        }
        return free_reduce(w);
    }

    Word term() {
        // `prefix` is the part of a split run ("ab") that an exponent does not bind to.
        Word prefix;
        Word atom;
        const Token& t = peek();
        if (t.kind == Tok::ident) {
            ++pos_;
            auto run = resolve(t);
            atom = {run.back()};
            run.pop_back();
            prefix = std::move(run);
        } else if (accept("(")) {
            atom = word();
            expect(")");
        } else if (accept("[")) {
            Word u = word();
            expect(",");
            Word v = word();
            expect("]");
            atom = commutator(u, v);
        } else {
            fail(t, "expected a generator, '(' or '['");
        }
        if (accept("^")) {
            long long sign = 1;
            if (accept("-"))
                sign = -1;
            else
                accept("+");
            const Token& e = peek();
            if (e.kind != Tok::integer) fail(e, "expected an integer exponent");
            ++pos_;
            if (e.text.size() > 9) fail(e, "exponent too large");
            atom = power(atom, sign * std::stoll(e.text));
        }
        prefix.insert(prefix.end(), atom.begin(), atom.end());
        return prefix;
    }

    Word resolve(const Token& t) const {
        auto it = std::find(names_.begin(), names_.end(), t.text);
        if (it != names_.end()) return {Letter{static_cast<std::uint32_t>(it - names_.begin()), false}};
        Word run;
        for (char c : t.text) {
            auto single = std::find(names_.begin(), names_.end(), std::string(1, c));
            if (single == names_.end()) fail(t, "undeclared generator '" + t.text + "'");
            run.push_back(Letter{static_cast<std::uint32_t>(single - names_.begin()), false});
        }
        return run;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<std::string> names_;
};

} // namespace

Presentation parse_presentation(std::string_view text) { return Parser(tokenize(text)).parse(); }

Presentation free_group(std::size_t rank) {
    if (rank == 0) throw std::invalid_argument("free_group: rank must be positive");
    std::vector<std::string> names;
    if (rank == 1)
        names.push_back("x");
    else
        for (std::size_t i = 1; i <= rank; ++i) names.push_back("x" + std::to_string(i));
    return Presentation(std::move(names), {});
}

Presentation free_product_of_cyclics(const std::vector<std::uint64_t>& orders) {
    std::vector<std::string> names;
    std::vector<Word> relators;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 2) throw std::invalid_argument("cyclic factor orders must be at least 2");
        names.push_back("x" + std::to_string(i + 1));
        relators.push_back(Word(orders[i], Letter{static_cast<std::uint32_t>(i), false}));
    }
    return Presentation(std::move(names), std::move(relators));
}

} // namespace fqlab::fp
