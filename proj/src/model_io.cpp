#include "decisive/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "decisive/error.hpp"

namespace decisive {

namespace {

struct Token {
  std::string text;
  std::size_t column = 1;  // 1-based
};

// Location-anchored syntax error.
[[noreturn]] void syntax(std::size_t line, std::size_t column, const std::string& message) {
  fail(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message);
}

// Splits on whitespace outside double quotes. With inline_comments a '#'
// outside quotes ends the line; otherwise only whole-line comments exist
// (pntm uses '#' as the blank symbol).
std::vector<Token> tokenize(std::string_view line, std::size_t lineno, bool inline_comments) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t first = line.find_first_not_of(" \t\r");
  if (first == std::string_view::npos || line[first] == '#') return out;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    if (inline_comments && line[i] == '#') break;
    Token tok;
    tok.column = i + 1;
    bool quoted = false;
    while (i < line.size()) {
      const char c = line[i];
      if (c == '"') {
        quoted = !quoted;
      } else if (!quoted && (c == ' ' || c == '\t' || c == '\r')) {
        break;
      } else if (!quoted && inline_comments && c == '#') {
        break;
      }
      tok.text += c;
      ++i;
    }
    if (quoted) syntax(lineno, tok.column, "unterminated string");
    out.push_back(std::move(tok));
  }
  return out;
}

struct Line {
  std::size_t number = 0;
  std::vector<Token> tokens;
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::uint64_t parse_u64(const Line& line, const Token& tok, std::string_view text, const std::string& what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    syntax(line.number, tok.column, "expected a non-negative integer for " + what + ", got '" + std::string(text) + "'");
  }
  return value;
}

Rational parse_fraction(const Line& line, const Token& tok, std::string_view text) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    syntax(line.number, tok.column, e.what());
  }
}

// "key=value" with a fixed key.
std::string_view value_of(const Line& line, const Token& tok, std::string_view key) {
  const std::string prefix = std::string(key) + "=";
  if (tok.text.rfind(prefix, 0) != 0) syntax(line.number, tok.column, "expected " + prefix + "...");
  return std::string_view(tok.text).substr(prefix.size());
}

std::string unquote(const Line& line, const Token& tok, std::string_view text) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"') {
    syntax(line.number, tok.column, "expected a quoted string, got '" + std::string(text) + "'");
  }
  return std::string(text.substr(1, text.size() - 2));
}

bool valid_name(const std::string& name) {
  if (name.empty() || name == "->") return false;
  return std::none_of(name.begin(), name.end(), [](char c) { return c == '"' || c == '=' || c == '#'; });
}

std::vector<std::string> declare_names(const Line& line, std::size_t from, std::vector<std::string> existing,
                                       const std::string& what) {
  for (std::size_t i = from; i < line.tokens.size(); ++i) {
    const Token& tok = line.tokens[i];
    if (!valid_name(tok.text)) syntax(line.number, tok.column, "invalid " + what + " name '" + tok.text + "'");
    if (std::find(existing.begin(), existing.end(), tok.text) != existing.end()) {
      syntax(line.number, tok.column, "duplicate " + what + " '" + tok.text + "'");
    }
    existing.push_back(tok.text);
  }
  return existing;
}

template <class M>
std::uint32_t state_index(const M& model, const Line& line, const Token& tok) {
  auto s = model.find_state(tok.text);
  if (!s) syntax(line.number, tok.column, "unknown state '" + tok.text + "'");
  return *s;
}

std::vector<Line> split_lines(std::string_view text, bool inline_comments, std::size_t from_line) {
  std::vector<Line> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    if (lineno >= from_line) {
      Line line{lineno, tokenize(text.substr(pos, end - pos), lineno, inline_comments)};
      if (!line.tokens.empty()) out.push_back(std::move(line));
    }
    pos = end + 1;
  }
  return out;
}

// Runs a target resolver and anchors its error at a file line.
template <class F>
void check_target(const Line& line, F&& resolve) {
  try {
    resolve();
  } catch (const Error& e) {
    syntax(line.number, line.tokens.front().column, e.what());
  }
}

std::string clause_text(const Line& line) {
  std::vector<std::string> parts;
  for (std::size_t i = 1; i < line.tokens.size(); ++i) parts.push_back(line.tokens[i].text);
  return join(parts, " ");
}

std::vector<std::string> words(const std::string& clause) {
  std::vector<std::string> out;
  Line line{0, tokenize(clause, 0, false)};
  for (auto& t : line.tokens) out.push_back(std::move(t.text));
  return out;
}

[[noreturn]] void bad_target(const std::string& message) { fail(ErrorCode::InvalidArgument, "target: " + message); }

// ---------------------------------------------------------------- pvass

pvass::Pvass parse_pvass(const std::vector<Line>& lines, const ParseOptions& options,
                         std::vector<std::string>& targets) {
  pvass::Pvass m;
  bool have_states = false;
  bool have_init = false;
  std::vector<const Line*> target_lines;

  auto var_index = [&](const Line& line, const Token& tok, const std::string& name) -> std::size_t {
    auto it = std::find(m.vars.begin(), m.vars.end(), name);
    if (it == m.vars.end()) syntax(line.number, tok.column, "unknown variable '" + name + "'");
    return static_cast<std::size_t>(it - m.vars.begin());
  };
  auto need_states = [&](const Line& line) {
    if (!have_states) syntax(line.number, 1, "'states' must come before '" + line.tokens[0].text + "'");
  };

  for (const Line& line : lines) {
    const std::string& kw = line.tokens[0].text;
    if (kw == "vars") {
      if (have_states) syntax(line.number, 1, "'vars' must come before 'states'");
      m.vars = declare_names(line, 1, m.vars, "variable");
      for (const auto& v : m.vars) {
        if (v.find_first_of("+-<>") != std::string::npos) syntax(line.number, 1, "invalid variable name '" + v + "'");
      }
    } else if (kw == "states") {
      m.states = declare_names(line, 1, m.states, "state");
      have_states = true;
    } else if (kw == "init") {
      need_states(line);
      if (have_init) syntax(line.number, 1, "duplicate 'init'");
      if (line.tokens.size() < 2) syntax(line.number, 1, "'init' needs a state");
      m.initial.control = state_index(m, line, line.tokens[1]);
      m.initial.values.assign(m.vars.size(), 0);
      for (std::size_t i = 2; i < line.tokens.size(); ++i) {
        const Token& tok = line.tokens[i];
        const auto eq = tok.text.find('=');
        if (eq == std::string::npos) syntax(line.number, tok.column, "expected var=value");
        const std::size_t v = var_index(line, tok, tok.text.substr(0, eq));
        m.initial.values[v] = static_cast<std::int64_t>(
            parse_u64(line, tok, std::string_view(tok.text).substr(eq + 1), "variable " + m.vars[v]));
      }
      have_init = true;
    } else if (kw == "trans") {
      need_states(line);
      if (line.tokens.size() < 4 || line.tokens[2].text != "->") {
        syntax(line.number, 1, "expected 'trans <src> -> <dst> [w=N] [x+1|x-1 ...]'");
      }
      pvass::Transition t;
      t.src = state_index(m, line, line.tokens[1]);
      t.dst = state_index(m, line, line.tokens[3]);
      t.op.assign(m.vars.size(), 0);
      std::vector<bool> seen(m.vars.size(), false);
      bool have_weight = false;
      for (std::size_t i = 4; i < line.tokens.size(); ++i) {
        const Token& tok = line.tokens[i];
        if (tok.text.rfind("w=", 0) == 0) {
          if (have_weight) syntax(line.number, tok.column, "duplicate weight");
          t.weight = parse_u64(line, tok, std::string_view(tok.text).substr(2), "weight");
          have_weight = true;
          continue;
        }
        const auto sign = tok.text.find_last_of("+-");
        if (sign == std::string::npos || sign == 0 || tok.text.substr(sign + 1) != "1") {
          syntax(line.number, tok.column, "expected w=N or an update such as x+1 / x-1, got '" + tok.text + "'");
        }
        const std::size_t v = var_index(line, tok, tok.text.substr(0, sign));
        if (seen[v]) syntax(line.number, tok.column, "variable '" + m.vars[v] + "' updated twice");
        seen[v] = true;
        t.op[v] = tok.text[sign] == '+' ? 1 : -1;
      }
      m.transitions.push_back(std::move(t));
    } else if (kw == "target") {
      need_states(line);
      target_lines.push_back(&line);
    } else {
      syntax(line.number, line.tokens[0].column, "unknown pvass statement '" + kw + "'");
    }
  }
  if (!have_states) syntax(lines.empty() ? 1 : lines.back().number, 1, "missing 'states'");
  if (!have_init) syntax(lines.empty() ? 1 : lines.back().number, 1, "missing 'init'");
  pvass::validate(m, {options.auto_selfloop});
  for (const Line* line : target_lines) {
    const std::string clause = clause_text(*line);
    check_target(*line, [&] { resolve_pvass_target(m, {clause}); });
    targets.push_back(clause);
  }
  return m;
}

std::string print_pvass(const pvass::Pvass& m) {
  std::ostringstream out;
  out << "pvass\n";
  if (!m.vars.empty()) out << "vars " << join(m.vars, " ") << "\n";
  out << "states " << join(m.states, " ") << "\n";
  out << "init " << m.states[m.initial.control];
  for (std::size_t i = 0; i < m.vars.size(); ++i) out << " " << m.vars[i] << "=" << m.initial.values[i];
  out << "\n";
  for (const auto& t : m.transitions) {
    out << "trans " << m.states[t.src] << " -> " << m.states[t.dst] << " w=" << t.weight;
    for (std::size_t i = 0; i < t.op.size(); ++i) {
      if (t.op[i] != 0) out << " " << m.vars[i] << (t.op[i] > 0 ? "+1" : "-1");
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- plcs

plcs::Word parse_word(const plcs::Plcs& m, const std::string& text, const std::string& where) {
  plcs::Word w;
  const bool compact = std::all_of(m.messages.begin(), m.messages.end(), [](const auto& s) { return s.size() == 1; });
  std::vector<std::string> names;
  if (text.find(' ') != std::string::npos || !compact) {
    std::istringstream in(text);
    for (std::string name; in >> name;) names.push_back(name);
  } else {
    for (char c : text) names.emplace_back(1, c);
  }
  for (const auto& name : names) {
    auto it = std::find(m.messages.begin(), m.messages.end(), name);
    if (it == m.messages.end()) fail(ErrorCode::InvalidArgument, where + ": unknown message '" + name + "'");
    w.push_back(static_cast<char>(it - m.messages.begin()));
  }
  return w;
}

plcs::Plcs parse_plcs(const Line& header, const std::vector<Line>& lines, const ParseOptions& options,
                      std::vector<std::string>& targets) {
  plcs::Plcs m;
  bool have_loss = false;
  for (std::size_t i = 1; i < header.tokens.size(); ++i) {
    const Token& tok = header.tokens[i];
    m.lambda = parse_fraction(header, tok, value_of(header, tok, "loss"));
    have_loss = true;
  }
  if (!have_loss) syntax(header.number, 1, "'plcs' needs loss=<fraction>");

  bool have_states = false;
  bool have_init = false;
  std::vector<const Line*> target_lines;
  auto need_states = [&](const Line& line) {
    if (!have_states) syntax(line.number, 1, "'states' must come before '" + line.tokens[0].text + "'");
  };
  auto channel_index = [&](const Line& line, const Token& tok, const std::string& name) -> std::uint32_t {
    auto it = std::find(m.channels.begin(), m.channels.end(), name);
    if (it == m.channels.end()) syntax(line.number, tok.column, "unknown channel '" + name + "'");
    return static_cast<std::uint32_t>(it - m.channels.begin());
  };
  auto message_index = [&](const Line& line, const Token& tok) -> std::uint32_t {
    auto it = std::find(m.messages.begin(), m.messages.end(), tok.text);
    if (it == m.messages.end()) syntax(line.number, tok.column, "unknown message '" + tok.text + "'");
    return static_cast<std::uint32_t>(it - m.messages.begin());
  };

  for (const Line& line : lines) {
    const std::string& kw = line.tokens[0].text;
    if (kw == "channels") {
      if (have_states) syntax(line.number, 1, "'channels' must come before 'states'");
      m.channels = declare_names(line, 1, m.channels, "channel");
    } else if (kw == "messages") {
      if (have_states) syntax(line.number, 1, "'messages' must come before 'states'");
      m.messages = declare_names(line, 1, m.messages, "message");
      for (const auto& name : m.messages) {
        if (name.find(' ') != std::string::npos) syntax(line.number, 1, "invalid message name");
      }
      if (m.messages.size() > 255) syntax(line.number, 1, "at most 255 messages are supported");
    } else if (kw == "states") {
      m.states = declare_names(line, 1, m.states, "state");
      have_states = true;
    } else if (kw == "init") {
      need_states(line);
      if (have_init) syntax(line.number, 1, "duplicate 'init'");
      if (line.tokens.size() < 2) syntax(line.number, 1, "'init' needs a state");
      m.initial.control = state_index(m, line, line.tokens[1]);
      m.initial.channels.assign(m.channels.size(), {});
      for (std::size_t i = 2; i < line.tokens.size(); ++i) {
        const Token& tok = line.tokens[i];
        const auto eq = tok.text.find('=');
        if (eq == std::string::npos) syntax(line.number, tok.column, "expected channel=\"word\"");
        const std::uint32_t c = channel_index(line, tok, tok.text.substr(0, eq));
        try {
          m.initial.channels[c] = parse_word(m, unquote(line, tok, std::string_view(tok.text).substr(eq + 1)), "init");
        } catch (const Error& e) {
          if (e.code() == ErrorCode::SyntaxError) throw;
          syntax(line.number, tok.column, e.what());
        }
      }
      have_init = true;
    } else if (kw == "trans") {
      need_states(line);
      if (line.tokens.size() < 4 || line.tokens[2].text != "->") {
        syntax(line.number, 1, "expected 'trans <src> -> <dst> [w=N] send c m|recv c m|nop'");
      }
      plcs::Transition t;
      t.src = state_index(m, line, line.tokens[1]);
      t.dst = state_index(m, line, line.tokens[3]);
      std::size_t i = 4;
      if (i < line.tokens.size() && line.tokens[i].text.rfind("w=", 0) == 0) {
        t.weight = parse_u64(line, line.tokens[i], std::string_view(line.tokens[i].text).substr(2), "weight");
        ++i;
      }
      if (i >= line.tokens.size()) syntax(line.number, 1, "missing operation (send, recv or nop)");
      const Token& op = line.tokens[i];
      if (op.text == "nop") {
        if (i + 1 != line.tokens.size()) syntax(line.number, line.tokens[i + 1].column, "unexpected token");
      } else if (op.text == "send" || op.text == "recv") {
        if (i + 3 != line.tokens.size()) syntax(line.number, op.column, "expected '" + op.text + " <channel> <message>'");
        t.op.kind = op.text == "send" ? plcs::Op::Kind::Send : plcs::Op::Kind::Recv;
        t.op.channel = channel_index(line, line.tokens[i + 1], line.tokens[i + 1].text);
        t.op.message = message_index(line, line.tokens[i + 2]);
      } else {
        syntax(line.number, op.column, "unknown operation '" + op.text + "'");
      }
      m.transitions.push_back(t);
    } else if (kw == "target") {
      need_states(line);
      target_lines.push_back(&line);
    } else {
      syntax(line.number, line.tokens[0].column, "unknown plcs statement '" + kw + "'");
    }
  }
  if (!have_states) syntax(header.number, 1, "missing 'states'");
  if (!have_init) syntax(header.number, 1, "missing 'init'");
  plcs::validate(m, {options.auto_selfloop});
  for (const Line* line : target_lines) {
    const std::string clause = clause_text(*line);
    check_target(*line, [&] { resolve_plcs_target(m, {clause}); });
    targets.push_back(clause);
  }
  return m;
}

std::string print_plcs(const plcs::Plcs& m) {
  std::ostringstream out;
  out << "plcs loss=" << to_fraction(m.lambda) << "\n";
  if (!m.channels.empty()) out << "channels " << join(m.channels, " ") << "\n";
  if (!m.messages.empty()) out << "messages " << join(m.messages, " ") << "\n";
  out << "states " << join(m.states, " ") << "\n";
  out << "init " << m.states[m.initial.control];
  for (std::size_t i = 0; i < m.channels.size(); ++i) {
    out << " " << m.channels[i] << "=\"" << m.render_word(m.initial.channels[i]) << "\"";
  }
  out << "\n";
  for (const auto& t : m.transitions) {
    out << "trans " << m.states[t.src] << " -> " << m.states[t.dst] << " w=" << t.weight << " ";
    switch (t.op.kind) {
      case plcs::Op::Kind::Nop: out << "nop"; break;
      case plcs::Op::Kind::Send: out << "send " << m.channels[t.op.channel] << " " << m.messages[t.op.message]; break;
      case plcs::Op::Kind::Recv: out << "recv " << m.channels[t.op.channel] << " " << m.messages[t.op.message]; break;
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- pntm

pntm::Pntm parse_pntm(const Line& header, const std::vector<Line>& lines, const ParseOptions& options,
                      std::vector<std::string>& targets) {
  pntm::Pntm m;
  bool have_eps = false;
  for (std::size_t i = 1; i < header.tokens.size(); ++i) {
    const Token& tok = header.tokens[i];
    if (tok.text.rfind("eps=", 0) == 0) {
      m.epsilon = parse_fraction(header, tok, value_of(header, tok, "eps"));
      have_eps = true;
    } else if (tok.text.rfind("tapes=", 0) == 0) {
      m.tapes = parse_u64(header, tok, value_of(header, tok, "tapes"), "tapes");
      if (m.tapes == 0 || m.tapes > 16) syntax(header.number, tok.column, "tapes must be between 1 and 16");
    } else {
      syntax(header.number, tok.column, "expected eps=<fraction> or tapes=<n>");
    }
  }
  if (!have_eps) syntax(header.number, 1, "'pntm' needs eps=<fraction>");

  bool have_states = false;
  bool have_init = false;
  const Line* init_line = nullptr;
  std::vector<const Line*> target_lines;
  auto need_states = [&](const Line& line) {
    if (!have_states) syntax(line.number, 1, "'states' must come before '" + line.tokens[0].text + "'");
    if (m.gamma.empty()) syntax(line.number, 1, "'gamma' must come before '" + line.tokens[0].text + "'");
  };
  auto symbol = [&](const Line& line, const Token& tok) -> pntm::Symbol {
    if (tok.text.size() != 1) syntax(line.number, tok.column, "tape symbols are single characters");
    auto s = m.find_symbol(tok.text[0]);
    if (!s) syntax(line.number, tok.column, "symbol '" + tok.text + "' is not in gamma");
    return *s;
  };
  auto symbols_of = [&](const Line& line, const Token& tok, const std::string& text) {
    std::vector<pntm::Symbol> out;
    for (char c : text) {
      auto s = m.find_symbol(c);
      if (!s) syntax(line.number, tok.column, std::string("symbol '") + c + "' is not in gamma");
      out.push_back(*s);
    }
    return out;
  };
  auto chars_of = [&](const Line& line) {
    std::vector<char> out;
    for (std::size_t i = 1; i < line.tokens.size(); ++i) {
      const Token& tok = line.tokens[i];
      if (tok.text.size() != 1 || tok.text[0] == '"') {
        syntax(line.number, tok.column, "alphabet symbols are single characters");
      }
      if (std::find(out.begin(), out.end(), tok.text[0]) != out.end()) {
        syntax(line.number, tok.column, "duplicate symbol '" + tok.text + "'");
      }
      out.push_back(tok.text[0]);
    }
    return out;
  };

  std::vector<std::vector<pntm::Symbol>> contents;
  std::vector<std::int64_t> heads;
  pntm::ControlState init_control = 0;

  for (const Line& line : lines) {
    const std::string& kw = line.tokens[0].text;
    if (kw == "gamma") {
      if (!m.gamma.empty()) syntax(line.number, 1, "duplicate 'gamma'");
      m.gamma = chars_of(line);
      if (m.gamma.empty()) syntax(line.number, 1, "'gamma' needs at least one symbol");
      if (!m.find_symbol('#')) syntax(line.number, 1, "gamma must contain the blank '#'");
    } else if (kw == "sigma") {
      m.sigma = chars_of(line);
    } else if (kw == "states") {
      m.states = declare_names(line, 1, m.states, "state");
      have_states = true;
    } else if (kw == "init") {
      need_states(line);
      if (have_init) syntax(line.number, 1, "duplicate 'init'");
      if (line.tokens.size() < 2) syntax(line.number, 1, "'init' needs a state");
      init_control = state_index(m, line, line.tokens[1]);
      contents.assign(m.tapes, {});
      heads.assign(m.tapes, 0);
      for (std::size_t i = 2; i < line.tokens.size(); ++i) {
        const Token& tok = line.tokens[i];
        const auto eq = tok.text.find('=');
        if (eq == std::string::npos) syntax(line.number, tok.column, "expected tapeN=\"...\" or headN=<int>");
        const std::string key = tok.text.substr(0, eq);
        const std::string_view value = std::string_view(tok.text).substr(eq + 1);
        auto index_of = [&](std::size_t prefix) -> std::size_t {
          const std::uint64_t k = parse_u64(line, tok, std::string_view(key).substr(prefix), "tape index");
          if (k >= m.tapes) syntax(line.number, tok.column, "tape index out of range");
          return k;
        };
        if (key.rfind("tape", 0) == 0) {
          const std::size_t k = index_of(4);
          contents[k] = symbols_of(line, tok, unquote(line, tok, value));
        } else if (key.rfind("head", 0) == 0) {
          const std::size_t k = index_of(4);
          std::int64_t h = 0;
          auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), h);
          if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
            syntax(line.number, tok.column, "expected an integer head position");
          }
          heads[k] = h;
        } else {
          syntax(line.number, tok.column, "unknown init field '" + key + "'");
        }
      }
      have_init = true;
      init_line = &line;
    } else if (kw == "trans") {
      need_states(line);
      // trans <src> read <M symbols> -> <dst> write <M symbols> move <M moves> [w=N]
      const auto& tk = line.tokens;
      const std::size_t mt = m.tapes;
      const std::size_t need = 2 + 1 + mt + 2 + 1 + mt + 1 + mt;
      if (tk.size() < need || tk.size() > need + 1 || tk[2].text != "read" || tk[3 + mt].text != "->" ||
          tk[5 + mt].text != "write" || tk[6 + 2 * mt].text != "move") {
        syntax(line.number, 1,
               "expected 'trans <src> read <" + std::to_string(mt) + " symbols> -> <dst> write <" +
                   std::to_string(mt) + " symbols> move <" + std::to_string(mt) + " moves> [w=N]'");
      }
      pntm::Transition t;
      t.src = state_index(m, line, tk[1]);
      for (std::size_t k = 0; k < mt; ++k) t.read.push_back(symbol(line, tk[3 + k]));
      t.dst = state_index(m, line, tk[4 + mt]);
      for (std::size_t k = 0; k < mt; ++k) t.write.push_back(symbol(line, tk[6 + mt + k]));
      for (std::size_t k = 0; k < mt; ++k) {
        const Token& mv = tk[7 + 2 * mt + k];
        if (mv.text == "+1" || mv.text == "1") {
          t.moves.push_back(1);
        } else if (mv.text == "-1") {
          t.moves.push_back(-1);
        } else if (mv.text == "0") {
          t.moves.push_back(0);
        } else {
          syntax(line.number, mv.column, "moves are -1, 0 or +1");
        }
      }
      if (tk.size() == need + 1) t.weight = parse_u64(line, tk[need], value_of(line, tk[need], "w"), "weight");
      m.transitions.push_back(std::move(t));
    } else if (kw == "target") {
      need_states(line);
      target_lines.push_back(&line);
    } else {
      syntax(line.number, line.tokens[0].column, "unknown pntm statement '" + kw + "'");
    }
  }
  if (m.gamma.empty()) syntax(header.number, 1, "missing 'gamma'");
  if (!have_states) syntax(header.number, 1, "missing 'states'");
  if (!have_init) syntax(header.number, 1, "missing 'init'");
  (void)init_line;
  m.initial = pntm::make_initial(m, init_control, contents, heads);
  pntm::validate(m, {options.auto_total});
  for (const Line* line : target_lines) {
    const std::string clause = clause_text(*line);
    check_target(*line, [&] { resolve_pntm_target(m, {clause}); });
    targets.push_back(clause);
  }
  return m;
}

std::string print_pntm(const pntm::Pntm& m) {
  std::ostringstream out;
  out << "pntm eps=" << to_fraction(m.epsilon) << " tapes=" << m.tapes << "\n";
  out << "gamma";
  for (char c : m.gamma) out << " " << c;
  out << "\n";
  if (!m.sigma.empty()) {
    out << "sigma";
    for (char c : m.sigma) out << " " << c;
    out << "\n";
  }
  out << "states " << join(m.states, " ") << "\n";
  out << "init " << m.states[m.initial.control];
  for (std::size_t k = 0; k < m.initial.tapes.size(); ++k) {
    const auto& tape = m.initial.tapes[k];
    out << " tape" << k << "=\"";
    for (pntm::Symbol s : tape.cells) out << m.gamma[s];
    out << "\" head" << k << "=" << tape.head - tape.origin;
  }
  out << "\n";
  for (const auto& t : m.transitions) {
    out << "trans " << m.states[t.src] << " read";
    for (pntm::Symbol s : t.read) out << " " << m.gamma[s];
    out << " -> " << m.states[t.dst] << " write";
    for (pntm::Symbol s : t.write) out << " " << m.gamma[s];
    out << " move";
    for (int mv : t.moves) out << " " << (mv > 0 ? "+1" : mv < 0 ? "-1" : "0");
    out << " w=" << t.weight << "\n";
  }
  return out.str();
}

template <class M>
std::uint32_t target_state(const M& model, const std::string& name) {
  auto s = model.find_state(name);
  if (!s) bad_target("unknown state '" + name + "'");
  return *s;
}

}  // namespace

const char* model_kind_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Pvass: return "pvass";
    case ModelKind::Plcs: return "plcs";
    case ModelKind::Pntm: return "pntm";
  }
  return "?";
}

Model parse_model(std::string_view text, const ParseOptions& options) {
  // Locate the header with inline comments allowed.
  std::size_t header_line = 0;
  std::optional<Line> header;
  {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size() && !header) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++lineno;
      auto tokens = tokenize(text.substr(pos, end - pos), lineno, true);
      if (!tokens.empty()) {
        header = Line{lineno, std::move(tokens)};
        header_line = lineno;
      }
      pos = end + 1;
    }
  }
  if (!header) fail(ErrorCode::SyntaxError, "line 1, column 1: empty model file (expected pvass, plcs or pntm)");
  const std::string& kind = header->tokens[0].text;
  Model model;
  if (kind == "pvass") {
    if (header->tokens.size() > 1) syntax(header->number, header->tokens[1].column, "'pvass' takes no parameters");
    model.data = parse_pvass(split_lines(text, true, header_line + 1), options, model.targets);
  } else if (kind == "plcs") {
    model.data = parse_plcs(*header, split_lines(text, true, header_line + 1), options, model.targets);
  } else if (kind == "pntm") {
    model.data = parse_pntm(*header, split_lines(text, false, header_line + 1), options, model.targets);
  } else {
    syntax(header->number, header->tokens[0].column, "unknown model kind '" + kind + "' (expected pvass, plcs or pntm)");
  }
  return model;
}

Model load_model_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), options);
}

std::string print_model(const Model& model) {
  std::string out = std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, pvass::Pvass>) return print_pvass(m);
        else if constexpr (std::is_same_v<T, plcs::Plcs>) return print_plcs(m);
        else return print_pntm(m);
      },
      model.data);
  for (const auto& clause : model.targets) out += "target " + clause + "\n";
  return out;
}

pvass::UpwardTarget resolve_pvass_target(const pvass::Pvass& model, const std::vector<std::string>& clauses) {
  if (clauses.empty()) bad_target("no target given");
  std::vector<pvass::Marking> minimal;
  std::set<pvass::ControlState> q;
  bool only_q = true;
  for (const auto& clause : clauses) {
    const auto w = words(clause);
    if (w.size() < 2) bad_target("expected 'up <state> [x>=n ...]' or 'q <state> ...', got '" + clause + "'");
    if (w[0] == "q") {
      for (std::size_t i = 1; i < w.size(); ++i) {
        const auto s = target_state(model, w[i]);
        q.insert(s);
        minimal.push_back({s, std::vector<std::int64_t>(model.num_vars(), 0)});
      }
    } else if (w[0] == "up") {
      only_q = false;
      pvass::Marking m{target_state(model, w[1]), std::vector<std::int64_t>(model.num_vars(), 0)};
      for (std::size_t i = 2; i < w.size(); ++i) {
        const auto ge = w[i].find(">=");
        if (ge == std::string::npos) bad_target("expected var>=n, got '" + w[i] + "'");
        auto it = std::find(model.vars.begin(), model.vars.end(), w[i].substr(0, ge));
        if (it == model.vars.end()) bad_target("unknown variable in '" + w[i] + "'");
        const std::string num = w[i].substr(ge + 2);
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
        if (num.empty() || ec != std::errc() || ptr != num.data() + num.size() || v < 0) {
          bad_target("expected a non-negative bound in '" + w[i] + "'");
        }
        m.values[static_cast<std::size_t>(it - model.vars.begin())] = v;
      }
      minimal.push_back(std::move(m));
    } else {
      bad_target("unknown target form '" + w[0] + "' (expected up or q)");
    }
  }
  if (only_q) return pvass::UpwardTarget::from_q_states(model, q);
  return pvass::UpwardTarget::from_basis(std::move(minimal));
}

plcs::UpwardTarget resolve_plcs_target(const plcs::Plcs& model, const std::vector<std::string>& clauses) {
  if (clauses.empty()) bad_target("no target given");
  std::vector<plcs::Config> minimal;
  std::set<plcs::ControlState> q;
  bool only_q = true;
  for (const auto& clause : clauses) {
    const auto w = words(clause);
    if (w.size() < 2) bad_target("expected 'up <state> [c>=\"w\" ...]' or 'q <state> ...', got '" + clause + "'");
    if (w[0] == "q") {
      for (std::size_t i = 1; i < w.size(); ++i) {
        const auto s = target_state(model, w[i]);
        q.insert(s);
        minimal.push_back({s, std::vector<plcs::Word>(model.num_channels())});
      }
    } else if (w[0] == "up") {
      only_q = false;
      plcs::Config c{target_state(model, w[1]), std::vector<plcs::Word>(model.num_channels())};
      for (std::size_t i = 2; i < w.size(); ++i) {
        const auto ge = w[i].find(">=");
        if (ge == std::string::npos) bad_target("expected channel>=\"word\", got '" + w[i] + "'");
        auto it = std::find(model.channels.begin(), model.channels.end(), w[i].substr(0, ge));
        if (it == model.channels.end()) bad_target("unknown channel in '" + w[i] + "'");
        std::string word = w[i].substr(ge + 2);
        if (word.size() < 2 || word.front() != '"' || word.back() != '"') bad_target("expected a quoted word in '" + w[i] + "'");
        c.channels[static_cast<std::size_t>(it - model.channels.begin())] =
            parse_word(model, word.substr(1, word.size() - 2), "target");
      }
      minimal.push_back(std::move(c));
    } else {
      bad_target("unknown target form '" + w[0] + "' (expected up or q)");
    }
  }
  if (only_q) return plcs::UpwardTarget::from_q_states(model, q);
  return plcs::UpwardTarget::from_basis(std::move(minimal));
}

std::set<pntm::ControlState> resolve_pntm_target(const pntm::Pntm& model, const std::vector<std::string>& clauses) {
  if (clauses.empty()) bad_target("no target given");
  std::set<pntm::ControlState> q;
  for (const auto& clause : clauses) {
    const auto w = words(clause);
    if (w.size() < 2 || w[0] != "q") bad_target("pntm targets are 'q <state> ...', got '" + clause + "'");
    for (std::size_t i = 1; i < w.size(); ++i) q.insert(target_state(model, w[i]));
  }
  return q;
}

}  // namespace decisive
