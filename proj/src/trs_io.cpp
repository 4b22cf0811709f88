#include "nqrw/trs_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nqrw/syntax.hpp"

namespace nqrw {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

Signature parse_sig(std::string_view body, std::size_t line) {
  Signature sig;
  std::istringstream in{std::string(body)};
  std::string item;
  while (in >> item) {
    auto slash = item.rfind('/');
    if (slash == std::string::npos || slash == 0) fail(line, "expected NAME/ARITY, got '" + item + "'");
    std::string name = item.substr(0, slash);
    for (char c : name)
      if (!is_identifier_char(c)) fail(line, "invalid symbol name '" + name + "'");
    std::size_t arity = 0;
    const char* first = item.data() + slash + 1;
    const char* last = item.data() + item.size();
    auto [ptr, ec] = std::from_chars(first, last, arity);
    if (ec != std::errc{} || ptr != last || first == last) fail(line, "invalid arity in '" + item + "'");
    try {
      sig.add(name, arity);
    } catch (const Error& e) {
      fail(line, e.what());
    }
  }
  return sig;
}

}  // namespace

Trs parse_trs(std::string_view text) {
  std::optional<Signature> sig;
  std::vector<Rule> rules;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.starts_with("sig") && (line.size() == 3 || std::isspace(static_cast<unsigned char>(line[3])))) {
      if (sig) fail(line_no, "duplicate sig line");
      if (!rules.empty()) fail(line_no, "sig must precede rules");
      sig = parse_sig(line.substr(3), line_no);
      continue;
    }
    if (!line.starts_with("rule") || line.size() == 4 || !std::isspace(static_cast<unsigned char>(line[4])))
      fail(line_no, "expected 'sig' or 'rule'");
    if (!sig) fail(line_no, "rule before sig line");

    std::string_view body = trim(line.substr(4));
    auto colon = body.find(':');
    if (colon == std::string_view::npos) fail(line_no, "missing ':' after rule label");
    std::string label(trim(body.substr(0, colon)));
    if (label.empty()) fail(line_no, "empty rule label");
    std::string_view sides = body.substr(colon + 1);
    auto arrow = sides.find("->");
    if (arrow == std::string_view::npos) fail(line_no, "missing '->'");
    if (sides.find("->", arrow + 2) != std::string_view::npos) fail(line_no, "more than one '->'");
    try {
      Term lhs = parse_term(sides.substr(0, arrow), *sig);
      Term rhs = parse_term(sides.substr(arrow + 2), *sig);
      rules.emplace_back(std::move(lhs), std::move(rhs), std::move(label));
    } catch (const Error& e) {
      fail(line_no, e.what());
    }
  }
  if (!sig) throw ParseError("missing sig line");
  try {
    return Trs(std::move(*sig), std::move(rules));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

Trs load_trs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trs(buf.str());
}

std::string format_rule(const Rule& r) { return r.label() + ": " + to_string(r.lhs()) + " -> " + to_string(r.rhs()); }

std::string format_trs(const Trs& trs, std::string_view comment) {
  std::string out;
  std::istringstream lines{std::string(comment)};
  for (std::string l; std::getline(lines, l);) out += "# " + l + "\n";
  out += "sig";
  for (const auto& [name, arity] : trs.signature().symbols()) out += " " + name + "/" + std::to_string(arity);
  out += "\n";
  for (const Rule& r : trs.rules()) out += "rule " + format_rule(r) + "\n";
  return out;
}

}  // namespace nqrw
