#ifndef FQLAB_PRESENTATION_HPP
#define FQLAB_PRESENTATION_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fqlab::fp {

/// A generator or its inverse.  Coset-table column 2*gen holds the generator,
/// column 2*gen+1 its inverse.
struct Letter {
    std::uint32_t gen = 0;
    bool inverse = false;

    std::size_t column() const { return 2 * static_cast<std::size_t>(gen) + (inverse ? 1 : 0); }
    static Letter from_column(std::size_t column) {
        return {static_cast<std::uint32_t>(column / 2), column % 2 == 1};
    }
    Letter inverted() const { return {gen, !inverse}; }
    friend bool operator==(const Letter&, const Letter&) = default;
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

inline std::size_t inverse_column(std::size_t column) { return column ^ 1U; }

using Word = std::vector<Letter>;

/// Cancels adjacent x x^-1 pairs.
Word free_reduce(const Word& w);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word power(const Word& w, long long e);
/// u^-1 v^-1 u v
Word commutator(const Word& u, const Word& v);
/// Exponent sum of each generator.
std::vector<long long> exponent_sums(const Word& w, std::size_t generator_count);

class Presentation {
  public:
    /// Throws std::invalid_argument on zero generators, duplicate or malformed
    /// names, or relators using undeclared generators.  Relators are stored
    /// freely reduced; relators that reduce to the empty word are dropped.
    Presentation(std::vector<std::string> generator_names, std::vector<Word> relators);

    std::size_t generator_count() const { return names_.size(); }
    const std::vector<std::string>& generator_names() const { return names_; }
    const std::vector<Word>& relators() const { return relators_; }

    std::string word_to_string(const Word& w) const;
    /// Canonical text form accepted by parse_presentation.
    std::string to_string() const;

    friend bool operator==(const Presentation&, const Presentation&) = default;

  private:
    std::vector<std::string> names_;
    std::vector<Word> relators_;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// Grammar:
///
///     gens: <name>+
///     rels: <relator> (, <relator>)*
///
///     relator = word | word = word
///     word    = term*
///     term    = atom [^ [+|-] int]
///     atom    = name | ( word ) | [ word , word ]
///
/// `[u, v]` is u^-1 v^-1 u v and `u = v` is u v^-1.  A token that is not a
/// declared name but spells a run of declared one-character names ("ab") is
/// read as that run.  '#' starts a comment.  The rels line may be omitted or
/// empty, and may be continued over several lines.
Presentation parse_presentation(std::string_view text);

/// Free group of the given rank on generators x1..xn (x for rank 1).
Presentation free_group(std::size_t rank);
/// < x1..xk | x1^s1, ..., xk^sk >
Presentation free_product_of_cyclics(const std::vector<std::uint64_t>& orders);

} // namespace fqlab::fp

#endif // FQLAB_PRESENTATION_HPP
