#include "mgplan/milp.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace mgplan::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string names::step(std::string_view family, std::size_t t) {
  std::string out(family);
  out += '_';
  out += std::to_string(t);
  return out;
}

std::size_t LinearModel::add_variable(std::string name, VarKind kind, double lower,
                                      double upper) {
  if (name.empty()) throw InputError("variable name must not be empty");
  if (kind == VarKind::binary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    throw InputError("variable '" + name + "' has invalid bounds");
  }
  const std::size_t idx = variables_.size();
  if (!by_name_.emplace(name, idx).second) {
    throw InputError("duplicate variable name '" + name + "'");
  }
  variables_.push_back({std::move(name), kind, lower, upper});
  return idx;
}

std::vector<Term> LinearModel::clean(std::vector<Term> terms) const {
  std::erase_if(terms, [](const Term& t) { return t.coef == 0.0; });
  for (const Term& t : terms) {
    if (t.var >= variables_.size()) throw InputError("term references an undeclared variable");
    if (!std::isfinite(t.coef)) throw InputError("non-finite coefficient");
  }
  return terms;
}

void LinearModel::set_objective(std::vector<Term> terms, double constant) {
  objective_ = clean(std::move(terms));
  objective_constant_ = constant;
}

void LinearModel::add_constraint(std::string name, std::vector<Term> terms, Sense sense,
                                 double rhs) {
  if (name.empty()) throw InputError("constraint name must not be empty");
  if (!std::isfinite(rhs)) throw InputError("constraint '" + name + "' has non-finite rhs");
  constraints_.push_back({std::move(name), clean(std::move(terms)), sense, rhs});
}

std::optional<std::size_t> LinearModel::find(std::string_view name) const {
  const auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t LinearModel::index(std::string_view name) const {
  const auto idx = find(name);
  if (!idx) throw InputError("unknown variable '" + std::string(name) + "'");
  return *idx;
}

std::size_t LinearModel::count(VarKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      variables_.begin(), variables_.end(), [&](const Variable& v) { return v.kind == kind; }));
}

void LinearModel::validate() const {
  std::unordered_map<std::string_view, int> row_names;
  for (const Constraint& c : constraints_) {
    if (++row_names[c.name] > 1) throw InputError("duplicate constraint name '" + c.name + "'");
    for (const Term& t : c.terms) {
      if (t.var >= variables_.size()) {
        throw InputError("constraint '" + c.name + "' references an undeclared variable");
      }
    }
  }
  for (const Variable& v : variables_) {
    if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0)) {
      throw InputError("binary variable '" + v.name + "' must lie in [0, 1]");
    }
  }
}

LinearModel build_model(const Catalog& catalog, const ScenarioSeries& series,
                        const AvailabilitySeries& availability, const SearchSpace& space,
                        const ProjectParams& params, const ModelOptions& options) {
  catalog.validate();
  params.validate();
  series.validate();
  space.validate();
  const std::size_t steps = series.size();
  if (availability.pv_per_kw.size() != steps || availability.wt_per_unit.size() != steps) {
    throw InputError("availability length does not match the scenario");
  }
  const std::size_t rows = steps * kRowsPerStep + 4;
  if (rows > options.max_rows) {
    throw ResourceLimitError("model would have " + std::to_string(rows) +
                             " rows, limit is " + std::to_string(options.max_rows));
  }

  const CatalogEconomics econ = catalog_economics(catalog, params);
  const ComponentSpec& bess = catalog.bess;
  const double dt = params.step_hours;
  const double eta = bess.one_way_efficiency;
  const double unit_bess_kw = bess.unit_bess_power_kw();
  const CountRange pv_range = space.effective_pv();
  const CountRange wt_range = space.effective_wt();
  const CountRange bess_range = space.effective_bess();
  // Big-M for the charge/discharge mode rows: the largest possible rating.
  const double power_bound = bess_range.max * unit_bess_kw;
  const double init_soc = params.initial_soc.value_or(bess.soc_max);

  LinearModel m;
  const auto n_pv = m.add_variable(std::string(names::n_pv), VarKind::integer, pv_range.min,
                                   pv_range.max);
  const auto n_wt = m.add_variable(std::string(names::n_wt), VarKind::integer, wt_range.min,
                                   wt_range.max);
  const auto n_bess = m.add_variable(std::string(names::n_bess), VarKind::integer,
                                     bess_range.min, bess_range.max);
  const auto soc0 = m.add_variable(names::step("soc", 0), VarKind::continuous, 0.0, kInf);

  m.set_objective({{n_pv, econ.pv.unit_npc}, {n_wt, econ.wt.unit_npc}, {n_bess, econ.bess.unit_npc}});
  m.add_constraint("soc_init", {{soc0, 1.0}, {n_bess, -init_soc * bess.unit_energy_kwh}},
                   Sense::eq, 0.0);

  std::vector<Term> unserved_sum, reserve_sum;
  unserved_sum.reserve(steps);
  reserve_sum.reserve(steps);
  double load_sum = 0.0;
  std::size_t prev_soc = soc0;
  for (std::size_t k = 0; k < steps; ++k) {
    const std::size_t t = k + 1;
    const auto ppv = m.add_variable(names::step("ppv", t), VarKind::continuous, 0.0, kInf);
    const auto pwt = m.add_variable(names::step("pwt", t), VarKind::continuous, 0.0, kInf);
    const auto pch = m.add_variable(names::step("pch", t), VarKind::continuous, 0.0, kInf);
    const auto pdch = m.add_variable(names::step("pdch", t), VarKind::continuous, 0.0, kInf);
    const auto soc = m.add_variable(names::step("soc", t), VarKind::continuous, 0.0, kInf);
    const auto pul = m.add_variable(names::step("pul", t), VarKind::continuous, 0.0, kInf);
    const auto pur = m.add_variable(names::step("pur", t), VarKind::continuous, 0.0, kInf);
    const auto udch = m.add_variable(names::step("udch", t), VarKind::binary, 0.0, 1.0);

    const double load = series.load_kw[k];
    const double pv_unit = catalog.pv.unit_power_kw * availability.pv_per_kw[k];
    const double wt_unit = availability.wt_per_unit[k];
    load_sum += load;

    m.add_constraint(names::step("pv_avail", t), {{ppv, 1.0}, {n_pv, -pv_unit}}, Sense::le, 0.0);
    m.add_constraint(names::step("wt_avail", t), {{pwt, 1.0}, {n_wt, -wt_unit}}, Sense::le, 0.0);
    m.add_constraint(names::step("dch_rate", t), {{pdch, 1.0}, {n_bess, -unit_bess_kw}},
                     Sense::le, 0.0);
    m.add_constraint(names::step("dch_mode", t), {{pdch, 1.0}, {udch, -power_bound}},
                     Sense::le, 0.0);
    m.add_constraint(names::step("ch_rate", t), {{pch, 1.0}, {n_bess, -unit_bess_kw}},
                     Sense::le, 0.0);
    m.add_constraint(names::step("ch_mode", t), {{pch, 1.0}, {udch, power_bound}}, Sense::le,
                     power_bound);
    m.add_constraint(names::step("soc_bal", t),
                     {{soc, 1.0}, {prev_soc, -1.0}, {pch, -eta * dt}, {pdch, dt / eta}},
                     Sense::eq, 0.0);
    m.add_constraint(names::step("soc_min", t),
                     {{soc, 1.0}, {n_bess, -bess.soc_min * bess.unit_energy_kwh}}, Sense::ge,
                     0.0);
    m.add_constraint(names::step("soc_max", t),
                     {{soc, 1.0}, {n_bess, -bess.soc_max * bess.unit_energy_kwh}}, Sense::le,
                     0.0);
    m.add_constraint(names::step("balance", t),
                     {{ppv, 1.0}, {pwt, 1.0}, {pdch, 1.0}, {pch, -1.0}, {pul, 1.0}}, Sense::ge,
                     load);
    m.add_constraint(names::step("reserve", t),
                     {{n_pv, pv_unit}, {n_wt, wt_unit}, {n_bess, unit_bess_kw}, {pur, 1.0}},
                     Sense::ge, (1.0 + params.reserve_factor) * load);

    unserved_sum.push_back({pul, 1.0});
    reserve_sum.push_back({pur, 1.0});
    prev_soc = soc;
  }
  m.add_constraint("unserved_cap", std::move(unserved_sum), Sense::le,
                   params.max_unserved_fraction * load_sum);
  m.add_constraint("reserve_cap", std::move(reserve_sum), Sense::le,
                   params.max_unmet_reserve_fraction * load_sum);
  if (params.cyclic_soc) {
    m.add_constraint("soc_terminal", {{prev_soc, 1.0}, {soc0, -1.0}}, Sense::ge, 0.0);
  }
  return m;
}

// ---------------------------------------------------------------- LP writer

namespace {

constexpr std::size_t kTermsPerLine = 8;

void append_terms(std::string& out, const LinearModel& m, const std::vector<Term>& terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const Term& t = terms[i];
    if (i > 0 && i % kTermsPerLine == 0) out += "\n  ";
    if (i == 0) {
      if (t.coef < 0) out += "- ";
    } else {
      out += t.coef < 0 ? " - " : " + ";
    }
    out += num(std::fabs(t.coef));
    out += ' ';
    out += m.variables()[t.var].name;
  }
}

std::string bound_text(double v) {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  return num(v);
}

}  // namespace

std::string export_lp(const LinearModel& m) {
  std::string out;
  out.reserve(64 * (m.constraints().size() + m.variables().size()) + 256);
  out += "\\ islanded microgrid sizing model\n";
  out += "\\ variables: " + std::to_string(m.count(VarKind::integer)) + " integer, " +
         std::to_string(m.count(VarKind::continuous)) + " continuous, " +
         std::to_string(m.count(VarKind::binary)) + " binary; rows: " +
         std::to_string(m.constraints().size()) + "\n";
  out += "Minimize\n obj: ";
  if (m.objective().empty() && !m.variables().empty()) {
    out += "0 " + m.variables().front().name;
  } else {
    append_terms(out, m, m.objective());
  }
  if (m.objective_constant() != 0.0) {
    out += m.objective_constant() < 0 ? " - " : " + ";
    out += num(std::fabs(m.objective_constant()));
  }
  out += "\nSubject To\n";
  for (const Constraint& c : m.constraints()) {
    out += ' ';
    out += c.name;
    out += ": ";
    if (c.terms.empty() && !m.variables().empty()) {
      out += "0 " + m.variables().front().name;
    } else {
      append_terms(out, m, c.terms);
    }
    out += c.sense == Sense::le ? " <= " : c.sense == Sense::ge ? " >= " : " = ";
    out += num(c.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const Variable& v : m.variables()) {
    out += ' ';
    if (v.lower == -kInf && v.upper == kInf) {
      out += v.name + " free";
    } else if (v.lower == v.upper) {
      out += v.name + " = " + num(v.lower);
    } else if (v.upper == kInf) {
      out += v.name + " >= " + num(v.lower);
    } else {
      out += bound_text(v.lower) + " <= " + v.name + " <= " + bound_text(v.upper);
    }
    out += '\n';
  }
  auto list_section = [&](const char* header, VarKind kind) {
    if (m.count(kind) == 0) return;
    out += header;
    std::size_t on_line = 0;
    for (const Variable& v : m.variables()) {
      if (v.kind != kind) continue;
      out += on_line == 0 ? " " : " ";
      out += v.name;
      if (++on_line == kTermsPerLine) {
        out += '\n';
        on_line = 0;
      }
    }
    if (on_line != 0) out += '\n';
  };
  list_section("Generals\n", VarKind::integer);
  list_section("Binaries\n", VarKind::binary);
  out += "End\n";
  return out;
}

// ---------------------------------------------------------------- LP reader

namespace {

enum class Tok { name, number, le, ge, eq, plus, minus, colon, end };

struct Token {
  Tok kind;
  std::string_view text;
  double value = 0.0;
  bool line_start = false;
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' ||
         c == ']' || c == '(' || c == ')' || c == '!' || c == '"' || c == '#' || c == '$' ||
         c == '%' || c == '&' || c == '/' || c == ',' || c == ';' || c == '?' || c == '@' ||
         c == '`' || c == '\'' || c == '{' || c == '}' || c == '|' || c == '~';
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  bool line_start = true;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      line_start = true;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '\\') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    Token tok{Tok::end, {}, 0.0, line_start};
    line_start = false;
    if (c == '<' || c == '>' || c == '=') {
      std::size_t len = 1;
      if (i + 1 < s.size() && (s[i + 1] == '=' || s[i + 1] == '<' || s[i + 1] == '>')) len = 2;
      const auto op = s.substr(i, len);
      if (op == "<=" || op == "=<" || op == "<") {
        tok.kind = Tok::le;
      } else if (op == ">=" || op == "=>" || op == ">") {
        tok.kind = Tok::ge;
      } else if (op == "=") {
        tok.kind = Tok::eq;
      } else {
        throw InputError("LP parse error: bad operator '" + std::string(op) + "'");
      }
      tok.text = op;
      i += len;
    } else if (c == '+' || c == '-') {
      tok.kind = c == '+' ? Tok::plus : Tok::minus;
      tok.text = s.substr(i, 1);
      ++i;
    } else if (c == ':') {
      tok.kind = Tok::colon;
      tok.text = s.substr(i, 1);
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), v);
      if (ec != std::errc{}) throw InputError("LP parse error: bad number");
      const auto len = static_cast<std::size_t>(ptr - (s.data() + i));
      tok.kind = Tok::number;
      tok.text = s.substr(i, len);
      tok.value = v;
      i += len;
    } else if (name_char(c)) {
      std::size_t j = i;
      while (j < s.size() && name_char(s[j])) ++j;
      tok.kind = Tok::name;
      tok.text = s.substr(i, j - i);
      i = j;
    } else {
      throw InputError(std::string("LP parse error: unexpected character '") + c + "'");
    }
    out.push_back(tok);
  }
  out.push_back({Tok::end, {}, 0.0, true});
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

enum class Section { none, objective, constraints, bounds, generals, binaries, end };

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;

  // Variables in order of first appearance, plus their attributes.
  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> bound_order;
  std::unordered_map<std::string, std::pair<double, double>> bounds;
  std::unordered_map<std::string, VarKind> kinds;

  struct RawTerm {
    std::string name;
    double coef;
  };
  struct RawRow {
    std::string name;
    std::vector<RawTerm> terms;
    Sense sense;
    double rhs;
  };
  std::vector<RawTerm> objective;
  double constant = 0.0;
  std::vector<RawRow> rows;

  const Token& peek(std::size_t ahead = 0) const {
    return toks[std::min(pos + ahead, toks.size() - 1)];
  }

  // Section keyword at the current token, consuming it.
  std::optional<Section> section_keyword() {
    const Token& t = peek();
    if (t.kind != Tok::name || !t.line_start) return std::nullopt;
    const std::string w = lower(t.text);
    if (w == "minimize" || w == "minimise" || w == "minimum" || w == "min") {
      ++pos;
      return Section::objective;
    }
    if (w == "maximize" || w == "maximise" || w == "maximum" || w == "max") {
      throw InputError("LP reader supports minimisation models only");
    }
    if (w == "subject" && peek(1).kind == Tok::name && lower(peek(1).text) == "to") {
      pos += 2;
      return Section::constraints;
    }
    if (w == "such" && peek(1).kind == Tok::name && lower(peek(1).text) == "that") {
      pos += 2;
      return Section::constraints;
    }
    if (w == "st" || w == "s.t.") {
      ++pos;
      return Section::constraints;
    }
    if (w == "bounds" || w == "bound") {
      ++pos;
      return Section::bounds;
    }
    if (w == "generals" || w == "general" || w == "gen" || w == "integers") {
      ++pos;
      return Section::generals;
    }
    if (w == "binaries" || w == "binary" || w == "bin") {
      ++pos;
      return Section::binaries;
    }
    if (w == "end") {
      ++pos;
      return Section::end;
    }
    return std::nullopt;
  }

  bool at_section_boundary() {
    const Token& t = peek();
    if (t.kind == Tok::end) return true;
    if (t.kind != Tok::name || !t.line_start) return false;
    const std::string w = lower(t.text);
    return w == "subject" || w == "such" || w == "st" || w == "s.t." || w == "bounds" ||
           w == "bound" || w == "generals" || w == "general" || w == "gen" ||
           w == "integers" || w == "binaries" || w == "binary" || w == "bin" || w == "end" ||
           w == "minimize" || w == "maximize";
  }

  void note(const std::string& name) {
    if (index.emplace(name, order.size()).second) order.push_back(name);
  }

  std::string row_label() {
    if (peek().kind == Tok::name && peek(1).kind == Tok::colon) {
      std::string label(peek().text);
      pos += 2;
      return label;
    }
    return {};
  }

  // Linear expression; stops at a sense operator or section boundary.
  void expression(std::vector<RawTerm>& terms, double* constant_out) {
    while (true) {
      if (at_section_boundary()) return;
      const Token& t = peek();
      if (t.kind == Tok::le || t.kind == Tok::ge || t.kind == Tok::eq) return;
      double sign = 1.0;
      while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
        if (peek().kind == Tok::minus) sign = -sign;
        ++pos;
      }
      double coef = 1.0;
      bool have_number = false;
      if (peek().kind == Tok::number) {
        coef = peek().value;
        have_number = true;
        ++pos;
      }
      if (peek().kind == Tok::name && !at_section_boundary()) {
        std::string name(peek().text);
        ++pos;
        note(name);
        if (sign * coef != 0.0) terms.push_back({std::move(name), sign * coef});
      } else if (have_number) {
        if (!constant_out) throw InputError("LP parse error: constant term in a row");
        *constant_out += sign * coef;
      } else {
        throw InputError("LP parse error near '" + std::string(peek().text) + "'");
      }
    }
  }

  double signed_number() {
    double sign = 1.0;
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      if (peek().kind == Tok::minus) sign = -sign;
      ++pos;
    }
    if (peek().kind == Tok::number) {
      const double v = peek().value;
      ++pos;
      return sign * v;
    }
    if (peek().kind == Tok::name) {
      const std::string w = lower(peek().text);
      if (w == "inf" || w == "infinity") {
        ++pos;
        return sign * kInf;
      }
    }
    throw InputError("LP parse error: expected a number near '" + std::string(peek().text) + "'");
  }

  bool bound_value_ahead() const {
    const Token& t = peek();
    if (t.kind == Tok::number || t.kind == Tok::plus || t.kind == Tok::minus) return true;
    if (t.kind == Tok::name) {
      const std::string w = lower(t.text);
      return w == "inf" || w == "infinity";
    }
    return false;
  }

  void set_bound(const std::string& name, std::optional<double> lo, std::optional<double> hi) {
    note(name);
    auto [it, inserted] = bounds.try_emplace(name, 0.0, kInf);
    if (inserted) bound_order.push_back(name);
    if (lo) it->second.first = *lo;
    if (hi) it->second.second = *hi;
  }

  void bound_entry() {
    if (bound_value_ahead()) {
      const double lo = signed_number();
      if (peek().kind != Tok::le) throw InputError("LP parse error in bounds");
      ++pos;
      if (peek().kind != Tok::name) throw InputError("LP parse error in bounds");
      std::string name(peek().text);
      ++pos;
      std::optional<double> hi;
      if (peek().kind == Tok::le) {
        ++pos;
        hi = signed_number();
      }
      set_bound(name, lo, hi);
      return;
    }
    if (peek().kind != Tok::name) throw InputError("LP parse error in bounds");
    std::string name(peek().text);
    ++pos;
    if (peek().kind == Tok::name && lower(peek().text) == "free") {
      ++pos;
      set_bound(name, -kInf, kInf);
      return;
    }
    const Tok op = peek().kind;
    ++pos;
    const double v = signed_number();
    if (op == Tok::le) {
      set_bound(name, std::nullopt, v);
    } else if (op == Tok::ge) {
      set_bound(name, v, std::nullopt);
    } else if (op == Tok::eq) {
      set_bound(name, v, v);
    } else {
      throw InputError("LP parse error in bounds for '" + name + "'");
    }
  }

  void run() {
    Section section = Section::none;
    while (peek().kind != Tok::end) {
      if (auto s = section_keyword()) {
        section = *s;
        if (section == Section::end) break;
        continue;
      }
      switch (section) {
        case Section::objective: {
          row_label();
          expression(objective, &constant);
          break;
        }
        case Section::constraints: {
          RawRow row;
          row.name = row_label();
          if (row.name.empty()) row.name = "R" + std::to_string(rows.size() + 1);
          expression(row.terms, nullptr);
          const Tok op = peek().kind;
          if (op != Tok::le && op != Tok::ge && op != Tok::eq) {
            throw InputError("LP parse error: row '" + row.name + "' lacks a sense");
          }
          ++pos;
          row.sense = op == Tok::le ? Sense::le : op == Tok::ge ? Sense::ge : Sense::eq;
          row.rhs = signed_number();
          rows.push_back(std::move(row));
          break;
        }
        case Section::bounds:
          bound_entry();
          break;
        case Section::generals:
        case Section::binaries: {
          if (peek().kind != Tok::name) throw InputError("LP parse error in variable list");
          std::string name(peek().text);
          ++pos;
          note(name);
          kinds[name] = section == Section::generals ? VarKind::integer : VarKind::binary;
          break;
        }
        default:
          throw InputError("LP parse error: content outside any section");
      }
    }
  }
};

}  // namespace

LinearModel parse_lp(std::string_view text) {
  Parser p;
  p.toks = tokenize(text);
  p.run();

  LinearModel m;
  std::unordered_map<std::string, bool> declared;
  auto declare = [&](const std::string& name) {
    if (!declared.emplace(name, true).second) return;
    const auto kind_it = p.kinds.find(name);
    const VarKind kind = kind_it == p.kinds.end() ? VarKind::continuous : kind_it->second;
    double lo = 0.0;
    double hi = kind == VarKind::binary ? 1.0 : kInf;
    if (const auto b = p.bounds.find(name); b != p.bounds.end()) {
      lo = b->second.first;
      hi = b->second.second;
    }
    m.add_variable(name, kind, lo, hi);
  };
  for (const auto& name : p.bound_order) declare(name);
  for (const auto& name : p.order) declare(name);

  auto convert = [&](const std::vector<Parser::RawTerm>& raw) {
    std::vector<Term> terms;
    terms.reserve(raw.size());
    for (const auto& t : raw) terms.push_back({m.index(t.name), t.coef});
    return terms;
  };
  m.set_objective(convert(p.objective), p.constant);
  for (const auto& row : p.rows) m.add_constraint(row.name, convert(row.terms), row.sense, row.rhs);
  m.validate();
  return m;
}

// ----------------------------------------------------------- solutions

SolutionAssignment parse_solution(std::string_view text) {
  SolutionAssignment out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed solution JSON: ") + e.what());
    }
    const nlohmann::json& values = doc.contains("values") ? doc["values"] : doc;
    if (!values.is_object()) throw InputError("solution JSON 'values' must be an object");
    for (const auto& [name, value] : values.items()) {
      if (!value.is_number()) throw InputError("solution value for '" + name + "' is not a number");
      out[name] = value.get<double>();
    }
    return out;
  }
  std::size_t i = 0;
  auto next_word = [&]() -> std::string_view {
    while (i < text.size()) {
      if (text[i] == '#') {
        while (i < text.size() && text[i] != '\n') ++i;
      } else if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
      } else {
        break;
      }
    }
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    return text.substr(start, i - start);
  };
  while (true) {
    const auto name = next_word();
    if (name.empty()) break;
    const auto value = next_word();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
      throw InputError("solution value for '" + std::string(name) + "' is not a number");
    }
    out[std::string(name)] = v;
  }
  return out;
}

SolutionAssignment assignment_from_dispatch(const Sizing& sizing, const DispatchResult& d) {
  SolutionAssignment a;
  a[std::string(names::n_pv)] = sizing.n_pv;
  a[std::string(names::n_wt)] = sizing.n_wt;
  a[std::string(names::n_bess)] = sizing.n_bess;
  a[names::step("soc", 0)] = d.totals.initial_stored;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const std::size_t t = k + 1;
    a[names::step("ppv", t)] = d.pv_used[k];
    a[names::step("pwt", t)] = d.wt_used[k];
    a[names::step("pch", t)] = d.charge[k];
    a[names::step("pdch", t)] = d.discharge[k];
    a[names::step("soc", t)] = d.stored_energy[k];
    a[names::step("pul", t)] = d.unserved[k];
    a[names::step("pur", t)] = d.unmet_reserve[k];
    a[names::step("udch", t)] = d.discharging[k] ? 1.0 : 0.0;
  }
  return a;
}

ResidualReport validate_solution(const LinearModel& model, const SolutionAssignment& assignment,
                                 double tolerance) {
  std::vector<double> x(model.variables().size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& v = model.variables()[i];
    const auto it = assignment.find(v.name);
    if (it == assignment.end()) throw InputError("assignment lacks variable '" + v.name + "'");
    x[i] = it->second;
  }

  ResidualReport report;
  auto record = [&](const std::string& name, double violation) {
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.worst = name;
    }
  };

  report.objective = model.objective_constant();
  for (const Term& t : model.objective()) report.objective += t.coef * x[t.var];

  report.rows.reserve(model.constraints().size());
  for (const Constraint& c : model.constraints()) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * x[t.var];
    RowResidual r{c.name, 0.0, 0.0};
    switch (c.sense) {
      case Sense::le:
        r.residual = lhs - c.rhs;
        r.violation = std::max(0.0, r.residual);
        break;
      case Sense::ge:
        r.residual = c.rhs - lhs;
        r.violation = std::max(0.0, r.residual);
        break;
      case Sense::eq:
        r.residual = lhs - c.rhs;
        r.violation = std::fabs(r.residual);
        break;
    }
    record(r.name, r.violation);
    report.rows.push_back(std::move(r));
  }

  for (std::size_t i = 0; i < x.size(); ++i) {
    const Variable& v = model.variables()[i];
    if (x[i] < v.lower) {
      RowResidual r{"lower:" + v.name, v.lower - x[i], v.lower - x[i]};
      record(r.name, r.violation);
      report.bounds.push_back(std::move(r));
    }
    if (x[i] > v.upper) {
      RowResidual r{"upper:" + v.name, x[i] - v.upper, x[i] - v.upper};
      record(r.name, r.violation);
      report.bounds.push_back(std::move(r));
    }
    if (v.kind != VarKind::continuous) {
      const double gap = std::fabs(x[i] - std::round(x[i]));
      if (gap > 0.0) {
        RowResidual r{"integrality:" + v.name, gap, gap};
        record(r.name, r.violation);
        report.bounds.push_back(std::move(r));
      }
    }
  }
  report.feasible = report.max_violation <= tolerance;
  return report;
}

}  // namespace mgplan::milp
