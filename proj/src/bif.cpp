#include "hetinf/bif.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <map>
#include <optional>
#include <sstream>

namespace hetinf {
namespace {

constexpr double kRowSumTolerance = 1e-6;

struct Token {
  enum Kind { Word, Number, Punct, String, End } kind = End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, current_.line, current_.column);
  }

 private:
  void advance() {
    skip_space_and_comments();
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::End;
      current_.text.clear();
      return;
    }
    const char c = text_[pos_];
    if (c == '"') {
      bump();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        s.push_back(text_[pos_]);
        bump();
      }
      if (pos_ >= text_.size()) {
        throw ParseError("unterminated string", current_.line, current_.column);
      }
      bump();
      current_.kind = Token::String;
      current_.text = std::move(s);
      return;
    }
    if (std::strchr("{}()[]|,;", c) != nullptr) {
      current_.kind = Token::Punct;
      current_.text.assign(1, c);
      bump();
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      // scanned as one token either way; state names may start with digits
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              std::strchr("+-._", text_[pos_]) != nullptr)) {
        s.push_back(text_[pos_]);
        bump();
      }
      try {
        std::size_t used = 0;
        current_.number = std::stod(s, &used);
        if (used == s.size()) {
          current_.kind = Token::Number;
          current_.text = std::move(s);
          return;
        }
      } catch (const std::exception&) {
        // fall through: treat as word (e.g. state names like "0-3_days")
      }
      current_.kind = Token::Word;
      current_.text = std::move(s);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              std::strchr("_-.", text_[pos_]) != nullptr)) {
        s.push_back(text_[pos_]);
        bump();
      }
      current_.kind = Token::Word;
      current_.text = std::move(s);
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     column_);
  }

  void skip_space_and_comments() {
    for (;;) {
      while (pos_ < text_.size() &&
             std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        bump();
      }
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
          text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
        continue;
      }
      if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
          text_[pos_ + 1] == '*') {
        bump();
        bump();
        while (pos_ + 1 < text_.size() &&
               !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          bump();
        }
        if (pos_ + 1 >= text_.size()) {
          throw ParseError("unterminated comment", line_, column_);
        }
        bump();
        bump();
        continue;
      }
      break;
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

class BifParser {
 public:
  explicit BifParser(const std::string& text) : lex_(text) {}

  BayesianNetwork parse() {
    while (lex_.peek().kind != Token::End) {
      const Token t = lex_.take();
      if (t.kind != Token::Word) {
        throw ParseError("expected block keyword", t.line, t.column);
      }
      if (t.text == "network") {
        parse_network_header();
      } else if (t.text == "variable") {
        parse_variable();
      } else if (t.text == "probability") {
        parse_probability();
      } else {
        throw ParseError("unknown block '" + t.text + "'", t.line, t.column);
      }
    }
    finish();
    return std::move(net_);
  }

 private:
  void expect_punct(const char* p) {
    const Token t = lex_.take();
    if (t.kind != Token::Punct || t.text != p) {
      throw ParseError(std::string("expected '") + p + "'", t.line, t.column);
    }
  }

  std::string expect_name() {
    const Token t = lex_.take();
    if (t.kind != Token::Word && t.kind != Token::Number) {
      throw ParseError("expected identifier", t.line, t.column);
    }
    return t.text;
  }

  void skip_property() {
    // `property` runs to the terminating semicolon.
    while (lex_.peek().kind != Token::End) {
      const Token t = lex_.take();
      if (t.kind == Token::Punct && t.text == ";") return;
    }
    lex_.fail("unterminated property");
  }

  void parse_network_header() {
    net_.name = expect_name();
    expect_punct("{");
    while (!(lex_.peek().kind == Token::Punct && lex_.peek().text == "}")) {
      if (lex_.peek().kind == Token::End) lex_.fail("unterminated network block");
      skip_property();
    }
    expect_punct("}");
  }

  void parse_variable() {
    VariableSpec v;
    v.name = expect_name();
    if (name_to_index_.count(v.name)) {
      lex_.fail("duplicate variable '" + v.name + "'");
    }
    expect_punct("{");
    while (!(lex_.peek().kind == Token::Punct && lex_.peek().text == "}")) {
      const Token t = lex_.take();
      if (t.kind == Token::Word && t.text == "type") {
        const Token kind = lex_.take();
        if (kind.kind != Token::Word || kind.text != "discrete") {
          throw ParseError("only discrete variables are supported", kind.line,
                           kind.column);
        }
        expect_punct("[");
        const Token n = lex_.take();
        if (n.kind != Token::Number) {
          throw ParseError("expected state count", n.line, n.column);
        }
        const int count = static_cast<int>(n.number);
        expect_punct("]");
        expect_punct("{");
        while (true) {
          v.states.push_back(expect_name());
          const Token sep = lex_.take();
          if (sep.kind == Token::Punct && sep.text == ",") continue;
          if (sep.kind == Token::Punct && sep.text == "}") break;
          throw ParseError("expected ',' or '}' in state list", sep.line,
                           sep.column);
        }
        expect_punct(";");
        if (static_cast<int>(v.states.size()) != count) {
          lex_.fail("state count mismatch for variable '" + v.name + "'");
        }
      } else if (t.kind == Token::Word && t.text == "property") {
        skip_property();
      } else {
        throw ParseError("unexpected token in variable block", t.line,
                         t.column);
      }
    }
    expect_punct("}");
    if (v.states.size() < 2) {
      lex_.fail("variable '" + v.name + "' needs at least 2 states");
    }
    v.index = static_cast<int>(net_.variables.size());
    name_to_index_[v.name] = v.index;
    net_.variables.push_back(std::move(v));
  }

  int lookup(const std::string& name) {
    auto it = name_to_index_.find(name);
    if (it == name_to_index_.end()) {
      lex_.fail("unknown variable '" + name + "'");
    }
    return it->second;
  }

  void parse_probability() {
    expect_punct("(");
    const int child = lookup(expect_name());
    Cpt cpt;
    cpt.child = child;
    cpt.card = net_.card(child);
    if (lex_.peek().kind == Token::Punct && lex_.peek().text == "|") {
      lex_.take();
      while (true) {
        const int p = lookup(expect_name());
        cpt.parents.push_back(p);
        cpt.parent_cards.push_back(net_.card(p));
        const Token sep = lex_.take();
        if (sep.kind == Token::Punct && sep.text == ",") continue;
        if (sep.kind == Token::Punct && sep.text == ")") break;
        throw ParseError("expected ',' or ')' in parent list", sep.line,
                         sep.column);
      }
    } else {
      expect_punct(")");
    }

    const int rows = cpt.row_count();
    cpt.table.assign(static_cast<std::size_t>(rows * cpt.card), -1.0);
    std::vector<bool> row_filled(static_cast<std::size_t>(rows), false);
    std::optional<std::vector<double>> default_row;

    expect_punct("{");
    while (!(lex_.peek().kind == Token::Punct && lex_.peek().text == "}")) {
      const Token t = lex_.peek();
      if (t.kind == Token::Word && t.text == "property") {
        lex_.take();
        skip_property();
      } else if (t.kind == Token::Word && t.text == "table") {
        lex_.take();
        const auto values = read_number_list();
        if (static_cast<int>(values.size()) != rows * cpt.card) {
          throw ParseError("table size mismatch for '" +
                               net_.variables[static_cast<std::size_t>(child)]
                                   .name +
                               "'",
                           t.line, t.column);
        }
        cpt.table = values;
        std::fill(row_filled.begin(), row_filled.end(), true);
      } else if (t.kind == Token::Word && t.text == "default") {
        lex_.take();
        default_row = read_number_list();
        if (static_cast<int>(default_row->size()) != cpt.card) {
          throw ParseError("default row size mismatch", t.line, t.column);
        }
      } else if (t.kind == Token::Punct && t.text == "(") {
        lex_.take();
        std::vector<int> parent_states;
        for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
          const Token st = lex_.take();
          if (st.kind != Token::Word && st.kind != Token::Number) {
            throw ParseError("expected state name", st.line, st.column);
          }
          parent_states.push_back(
              state_index(cpt.parents[i], st.text, st.line, st.column));
          if (i + 1 < cpt.parents.size()) expect_punct(",");
        }
        expect_punct(")");
        const auto values = read_number_list();
        if (static_cast<int>(values.size()) != cpt.card) {
          throw ParseError("row size mismatch", t.line, t.column);
        }
        const int row = cpt.row_index(parent_states);
        std::copy(values.begin(), values.end(),
                  cpt.table.begin() +
                      static_cast<std::size_t>(row * cpt.card));
        row_filled[static_cast<std::size_t>(row)] = true;
      } else {
        throw ParseError("unexpected token in probability block", t.line,
                         t.column);
      }
    }
    const Token close = lex_.take();  // '}'

    for (int r = 0; r < rows; ++r) {
      if (!row_filled[static_cast<std::size_t>(r)]) {
        if (!default_row) {
          throw ParseError(
              "missing CPT row for '" +
                  net_.variables[static_cast<std::size_t>(child)].name + "'",
              close.line, close.column);
        }
        std::copy(default_row->begin(), default_row->end(),
                  cpt.table.begin() + static_cast<std::size_t>(r * cpt.card));
      }
      normalize_row(cpt, r, close);
    }

    if (cpts_.count(child)) {
      throw ParseError(
          "duplicate probability block for '" +
              net_.variables[static_cast<std::size_t>(child)].name + "'",
          close.line, close.column);
    }
    cpts_[child] = std::move(cpt);
  }

  void normalize_row(Cpt& cpt, int row, const Token& at) {
    double sum = 0.0;
    for (int k = 0; k < cpt.card; ++k) {
      const double p = cpt.prob(row, k);
      if (p < 0.0 || p > 1.0 + kRowSumTolerance) {
        throw ParseError("probability out of range", at.line, at.column);
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ParseError("CPT row sums to " + format_double(sum) +
                           " for '" +
                           net_.variables[static_cast<std::size_t>(cpt.child)]
                               .name +
                           "'",
                       at.line, at.column);
    }
    if (std::abs(sum - 1.0) > 1e-12) {  // keep renormalization idempotent
      for (int k = 0; k < cpt.card; ++k) {
        cpt.table[static_cast<std::size_t>(row * cpt.card + k)] /= sum;
      }
    }
  }

  int state_index(int var, const std::string& state, int line, int column) {
    const auto& states = net_.variables[static_cast<std::size_t>(var)].states;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] == state) return static_cast<int>(i);
    }
    throw ParseError("unknown state '" + state + "' of variable '" +
                         net_.variables[static_cast<std::size_t>(var)].name +
                         "'",
                     line, column);
  }

  std::vector<double> read_number_list() {
    std::vector<double> values;
    while (true) {
      const Token t = lex_.take();
      if (t.kind != Token::Number) {
        throw ParseError("expected probability value", t.line, t.column);
      }
      values.push_back(t.number);
      const Token sep = lex_.take();
      if (sep.kind == Token::Punct && sep.text == ",") continue;
      if (sep.kind == Token::Punct && sep.text == ";") break;
      throw ParseError("expected ',' or ';' after value", sep.line,
                       sep.column);
    }
    return values;
  }

  void finish() {
    for (const auto& v : net_.variables) {
      if (!cpts_.count(v.index)) {
        throw ParseError("missing probability block for '" + v.name + "'", 0,
                         0);
      }
      net_.cpts.push_back(std::move(cpts_[v.index]));
    }
  }

  Lexer lex_;
  BayesianNetwork net_;
  std::map<std::string, int> name_to_index_;
  std::map<int, Cpt> cpts_;
};

}  // namespace

BayesianNetwork parse_bif(const std::string& text) {
  BifParser parser(text);
  return parser.parse();
}

BayesianNetwork parse_bif_file(const std::string& path) {
  return parse_bif(read_text_file(path));
}

std::string write_bif(const BayesianNetwork& net) {
  std::ostringstream out;
  out << "network " << (net.name.empty() ? "unknown" : net.name) << " {\n}\n";
  for (const auto& v : net.variables) {
    out << "variable " << v.name << " {\n  type discrete [ " << v.card()
        << " ] { ";
    for (int k = 0; k < v.card(); ++k) {
      if (k) out << ", ";
      out << v.states[static_cast<std::size_t>(k)];
    }
    out << " };\n}\n";
  }
  for (const auto& c : net.cpts) {
    out << "probability ( "
        << net.variables[static_cast<std::size_t>(c.child)].name;
    if (!c.parents.empty()) {
      out << " | ";
      for (std::size_t i = 0; i < c.parents.size(); ++i) {
        if (i) out << ", ";
        out << net.variables[static_cast<std::size_t>(c.parents[i])].name;
      }
    }
    out << " ) {\n";
    if (c.parents.empty()) {
      out << "  table ";
      for (int k = 0; k < c.card; ++k) {
        if (k) out << ", ";
        out << format_double(c.prob(0, k));
      }
      out << ";\n";
    } else {
      const int rows = c.row_count();
      std::vector<int> parent_states(c.parents.size(), 0);
      for (int r = 0; r < rows; ++r) {
        out << "  (";
        for (std::size_t i = 0; i < c.parents.size(); ++i) {
          if (i) out << ", ";
          const auto& pv =
              net.variables[static_cast<std::size_t>(c.parents[i])];
          out << pv.states[static_cast<std::size_t>(parent_states[i])];
        }
        out << ") ";
        for (int k = 0; k < c.card; ++k) {
          if (k) out << ", ";
          out << format_double(c.prob(r, k));
        }
        out << ";\n";
        for (int i = static_cast<int>(parent_states.size()) - 1; i >= 0; --i) {
          if (++parent_states[static_cast<std::size_t>(i)] <
              c.parent_cards[static_cast<std::size_t>(i)]) {
            break;
          }
          parent_states[static_cast<std::size_t>(i)] = 0;
        }
      }
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace hetinf
