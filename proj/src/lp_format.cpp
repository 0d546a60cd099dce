#include <cctype>
#include <sstream>

#include "fairshare/errors.hpp"
#include "fairshare/milp.hpp"

namespace fairshare {

namespace {

void write_terms(std::ostringstream& out, const MilpModel& model, const std::vector<MilpTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    const bool neg = sgn(t.coef) < 0;
    const Rational mag = neg ? Rational(-t.coef) : t.coef;
    if (first)
      out << (neg ? "- " : "");
    else
      out << (neg ? " - " : " + ");
    if (mag != 1) out << to_string(mag) << ' ';
    out << model.vars[t.var].name;
    first = false;
  }
  if (first) out << '0';
}

const char* sense_text(Sense s) { return s == Sense::Le ? "<=" : s == Sense::Ge ? ">=" : "="; }

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// "coef name" terms separated by + and -, names resolved (and created on
// first use) through `lookup`.
template <class Lookup>
std::vector<MilpTerm> read_terms(const std::string& text, Lookup&& lookup, int line_no) {
  std::vector<MilpTerm> out;
  std::istringstream in(text);
  std::string tok;
  Rational coef = 1;
  bool have_coef = false;
  int sign = 1;
  while (in >> tok) {
    if (tok == "+" || tok == "-") {
      if (have_coef) throw ParseError("line " + std::to_string(line_no) + ": dangling coefficient");
      sign = tok == "-" ? -sign : sign;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
      if (have_coef) throw ParseError("line " + std::to_string(line_no) + ": two coefficients in a row");
      try {
        coef = parse_rational(tok);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad coefficient '" + tok + "'");
      }
      have_coef = true;
      continue;
    }
    out.push_back({lookup(tok), sign * coef});
    coef = 1;
    have_coef = false;
    sign = 1;
  }
  if (have_coef) throw ParseError("line " + std::to_string(line_no) + ": constant on the left-hand side");
  return out;
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  std::ostringstream out;
  out << "\\ n = 4, q = 3 certificate; x1..x14 item values, z the nested share bound\n";
  out << "Minimize\n" << model.objective_label << ": ";
  write_terms(out, model, model.objective);
  out << "\nSubject To\n";
  for (const auto& c : model.constraints) {
    out << c.label << ": ";
    write_terms(out, model, c.terms);
    out << ' ' << sense_text(c.sense) << ' ' << to_string(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : model.vars) {
    if (v.binary)
      out << "0 <= " << v.name << " <= 1\n";
    else
      out << v.name << " >= 0\n";
  }
  out << "Binaries\n";
  for (const auto& v : model.vars)
    if (v.binary) out << v.name << '\n';
  out << "End\n";
  return out.str();
}

MilpModel parse_lp(std::string_view text) {
  enum class Section { None, Objective, Constraints, Bounds, Binaries, End };
  MilpModel model;
  model.objective_label.clear();
  Section section = Section::None;
  std::vector<std::string> binaries;

  auto lookup = [&](const std::string& name) {
    int v = model.index_of(name);
    if (v < 0) {
      model.vars.push_back({name, false});
      v = static_cast<int>(model.vars.size()) - 1;
    }
    return v;
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  // Variables are numbered in Bounds order, which names every variable;
  // rows are kept as text until then.
  std::vector<std::pair<int, std::string>> pending_rows;
  std::pair<int, std::string> pending_objective{0, ""};
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '\\') continue;
    const std::string key = lower(line);
    if (key == "minimize" || key == "minimise" || key == "min") {
      section = Section::Objective;
      continue;
    }
    if (key == "subject to" || key == "st" || key == "s.t.") {
      section = Section::Constraints;
      continue;
    }
    if (key == "bounds") {
      section = Section::Bounds;
      continue;
    }
    if (key == "binaries" || key == "binary") {
      section = Section::Binaries;
      continue;
    }
    if (key == "end") {
      section = Section::End;
      continue;
    }
    switch (section) {
      case Section::Objective:
        pending_objective = {line_no, line};
        break;
      case Section::Constraints:
        pending_rows.emplace_back(line_no, line);
        break;
      case Section::Bounds: {
        std::istringstream b(line);
        std::vector<std::string> toks;
        for (std::string t; b >> t;) toks.push_back(t);
        if (toks.size() == 3 && toks[1] == ">=" && toks[2] == "0")
          lookup(toks[0]);
        else if (toks.size() == 5 && toks[0] == "0" && toks[1] == "<=" && toks[3] == "<=" && toks[4] == "1")
          lookup(toks[2]);
        else
          throw ParseError("line " + std::to_string(line_no) + ": unsupported bound '" + line + "'");
        break;
      }
      case Section::Binaries: {
        std::istringstream b(line);
        for (std::string t; b >> t;) binaries.push_back(t);
        break;
      }
      default:
        throw ParseError("line " + std::to_string(line_no) + ": text outside any section");
    }
  }
  if (section != Section::End) throw ParseError("missing End");

  for (const auto& name : binaries) model.vars[lookup(name)].binary = true;

  auto split_label = [](const std::string& line, int no) {
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("line " + std::to_string(no) + ": missing label");
    return std::pair{trim(std::string_view(line).substr(0, colon)), trim(std::string_view(line).substr(colon + 1))};
  };
  if (!pending_objective.second.empty()) {
    auto [label, body] = split_label(pending_objective.second, pending_objective.first);
    model.objective_label = label;
    model.objective = read_terms(body, lookup, pending_objective.first);
  }
  for (const auto& [no, line] : pending_rows) {
    auto [label, body] = split_label(line, no);
    MilpConstraint c;
    c.label = label;
    std::size_t op = body.find_first_of("<>=");
    if (op == std::string::npos) throw ParseError("line " + std::to_string(no) + ": missing comparison");
    std::size_t len = body[op] != '=' && op + 1 < body.size() && body[op + 1] == '=' ? 2 : 1;
    c.sense = body[op] == '<' ? Sense::Le : body[op] == '>' ? Sense::Ge : Sense::Eq;
    c.terms = read_terms(body.substr(0, op), lookup, no);
    try {
      c.rhs = parse_rational(trim(std::string_view(body).substr(op + len)));
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(no) + ": right-hand side must be a constant");
    }
    model.constraints.push_back(std::move(c));
  }
  return model;
}

}  // namespace fairshare
