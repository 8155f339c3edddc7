#include "uavlab/flightdyn/table_io.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "uavlab/common/error.hpp"
#include "uavlab/common/format.hpp"
#include "uavlab/common/units.hpp"

namespace uavlab::flightdyn {
namespace {

struct RawBlock {
  std::size_t line = 0;
  std::optional<std::pair<std::string, std::string>> term;
  std::vector<TableAxis> axes;
  std::vector<double> values;
};

class Lexer {
 public:
  explicit Lexer(std::istream& in) : in_(in) {}

  /// Next non-empty line split into tokens; false at end of input.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      tokens.clear();
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }
  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

double number(const std::string& tok, const Lexer& lex, const std::string& field) {
  const auto v = parse_double(tok);
  if (!v || !std::isfinite(*v)) {
    throw ParseError("line " + std::to_string(lex.line()) + ": '" + tok + "' is not a number",
                     lex.line(), field);
  }
  return *v;
}

std::vector<RawBlock> read_blocks(std::istream& in, const std::string& magic) {
  Lexer lex(in);
  std::vector<std::string> tok;
  if (!lex.next(tok) || tok.size() != 2 || tok[0] != magic || tok[1] != "1") {
    throw ParseError("expected header '" + magic + " 1'", lex.line(), "header");
  }
  std::vector<RawBlock> blocks;
  RawBlock cur;
  bool open = false;
  bool in_data = false;
  while (lex.next(tok)) {
    if (in_data) {
      if (tok[0] == "end") {
        if (tok.size() != 1) throw ParseError("trailing tokens after 'end'", lex.line(), "end");
        blocks.push_back(std::move(cur));
        cur = RawBlock{};
        open = in_data = false;
        continue;
      }
      for (const auto& t : tok) cur.values.push_back(number(t, lex, "data"));
      continue;
    }
    if (tok[0] == "term") {
      if (open) throw ParseError("'term' inside an unfinished block", lex.line(), "term");
      if (tok.size() != 3) throw ParseError("'term' needs <coefficient> <multiplier>", lex.line(), "term");
      cur.line = lex.line();
      cur.term = std::make_pair(tok[1], tok[2]);
      open = true;
    } else if (tok[0] == "axis") {
      if (!open) {
        cur.line = lex.line();
        open = true;
      }
      if (tok.size() < 4) throw ParseError("'axis' needs <name> <unit> <breakpoints...>", lex.line(), "axis");
      double scale = 1.0;
      const std::string& unit = tok[2];
      if (unit == "deg") {
        scale = kPi / 180.0;
      } else if (unit != "rad" && unit != "m" && unit != "m/s" && unit != "1") {
        throw ParseError("unknown unit '" + unit + "'", lex.line(), "axis." + tok[1]);
      }
      TableAxis axis{tok[1], {}};
      for (std::size_t i = 3; i < tok.size(); ++i) {
        axis.breakpoints.push_back(number(tok[i], lex, "axis." + tok[1]) * scale);
      }
      cur.axes.push_back(std::move(axis));
    } else if (tok[0] == "data") {
      if (!open) {
        cur.line = lex.line();
        open = true;
      }
      in_data = true;
    } else {
      throw ParseError("unexpected token '" + tok[0] + "'", lex.line(), tok[0]);
    }
  }
  if (open) throw ParseError("unterminated block (missing 'end')", lex.line(), "end");
  return blocks;
}

GriddedTable to_table(RawBlock& b) {
  try {
    return GriddedTable(std::move(b.axes), std::move(b.values));
  } catch (const ConfigError& e) {
    throw ParseError("block at line " + std::to_string(b.line) + ": " + e.what(), b.line, "data");
  }
}

std::string_view unit_of(const std::string& axis) {
  if (axis == "airspeed") return "m/s";
  if (axis == "altitude") return "m";
  if (axis == "alpha" || axis == "beta" || axis == "elevator" || axis == "aileron" ||
      axis == "rudder") {
    return "rad";
  }
  return "1";
}

void write_block_body(std::ostream& out, const GriddedTable& t) {
  for (const auto& a : t.axes()) {
    out << "axis " << a.name << ' ' << unit_of(a.name);
    for (double v : a.breakpoints) out << ' ' << format_double(v);
    out << '\n';
  }
  out << "data\n";
  const std::size_t row = t.axes().empty() ? 1 : t.axes().back().breakpoints.size();
  const auto& values = t.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_double(values[i]) << ((i + 1) % row == 0 ? '\n' : ' ');
  }
  out << "end\n";
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

AeroTables read_aero_tables(std::istream& in) {
  auto blocks = read_blocks(in, "uavlab-aero");
  std::vector<AeroTerm> terms;
  for (auto& b : blocks) {
    if (!b.term) throw ParseError("aero block without 'term'", b.line, "term");
    AeroTerm t;
    try {
      t.coefficient = parse_aero_coefficient(b.term->first);
      t.multiplier = parse_aero_variable(b.term->second);
      for (const auto& a : b.axes) t.axes.push_back(parse_aero_variable(a.name));
    } catch (const ConfigError& e) {
      throw ParseError(std::string(e.what()), b.line, "term");
    }
    t.table = to_table(b);
    terms.push_back(std::move(t));
  }
  if (terms.empty()) throw ParseError("aero file has no terms", 0, "term");
  return AeroTables(std::move(terms));
}

AeroTables load_aero_tables(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_aero_tables(in);
}

void write_aero_tables(std::ostream& out, const AeroTables& tables) {
  out << "uavlab-aero 1\n# angles and deflections in rad; rates normalised (p*b/2V etc.)\n";
  for (const auto& t : tables.terms()) {
    out << "term " << to_string(t.coefficient) << ' ' << to_string(t.multiplier) << '\n';
    write_block_body(out, t.table);
  }
}

ThrustTable read_thrust_table(std::istream& in) {
  auto blocks = read_blocks(in, "uavlab-thrust");
  if (blocks.size() != 1) throw ParseError("thrust file must hold exactly one table", 0, "data");
  if (blocks[0].term) throw ParseError("'term' is not valid in a thrust file", blocks[0].line, "term");
  const std::size_t line = blocks[0].line;
  try {
    return ThrustTable(to_table(blocks[0]));
  } catch (const ConfigError& e) {
    throw ParseError(e.what(), line, "axis");
  }
}

ThrustTable load_thrust_table(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_thrust_table(in);
}

void write_thrust_table(std::ostream& out, const ThrustTable& table) {
  out << "uavlab-thrust 1\n# thrust in N over throttle [0,1], airspeed m/s, altitude m\n";
  write_block_body(out, table.table());
}

}  // namespace uavlab::flightdyn
