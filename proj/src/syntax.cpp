#include "nqrw/syntax.hpp"

#include <cctype>

namespace nqrw {

bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
}

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, const Signature& sig, const LeafResolver& leaf)
      : text_(text), sig_(sig), leaf_(leaf) {}

  Term parse() {
    Term t = term();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("term syntax error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_identifier_char(text_[pos_])) ++pos_;
    if (start == pos_) fail(pos_ < text_.size() ? "expected identifier" : "unexpected end of input");
    return std::string(text_.substr(start, pos_ - start));
  }

  Term term() {
    std::string name = identifier();
    bool has_args = accept('(');
    if (!sig_.contains(name)) {
      if (has_args) fail("unknown symbol '" + name + "'");
      return leaf_ ? leaf_(name) : Term::var(std::move(name));
    }
    std::size_t arity = sig_.arity(name);
    std::vector<Term> args;
    if (has_args) {
      if (!accept(')')) {
        do {
          args.push_back(term());
        } while (accept(','));
        if (!accept(')')) fail("expected ')' or ','");
      }
    }
    if (args.size() != arity)
      fail("symbol '" + name + "' expects " + std::to_string(arity) + " arguments, got " +
           std::to_string(args.size()));
    return Term::app(std::move(name), std::move(args));
  }

  std::string_view text_;
  const Signature& sig_;
  const LeafResolver& leaf_;
  std::size_t pos_ = 0;
};

void print(const Term& t, std::string& out) {
  out += t.name();
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    print(t.args()[i], out);
  }
  out += ')';
}

}  // namespace

Term parse_term(std::string_view text, const Signature& sig, const LeafResolver& leaf) {
  return TermParser(text, sig, leaf).parse();
}

std::string to_string(const Term& t) {
  std::string out;
  print(t, out);
  return out;
}

}  // namespace nqrw
