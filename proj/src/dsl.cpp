#include "syllagraph/dsl.hpp"

#include <charconv>
#include <cstdint>
#include <set>
#include <sstream>
#include <tuple>

namespace syllagraph {

std::string ParseError::message() const {
  return "expected " + expected + ", found " + found;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  Word,
  String,
  Int,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Colon,
  Arrow,
  Equals,
  Invalid,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // decoded value for strings, spelling otherwise
  long long value = 0;
  SourceLocation loc;
};

std::string display(const Token& t) {
  switch (t.kind) {
    case Tok::String: return quote(t.text);
    case Tok::End: return "end of input";
    case Tok::Invalid: return "invalid token";
    default: return t.text;
  }
}

bool word_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool word_char(char c) {
  return word_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

bool digit(char c) { return c >= '0' && c <= '9'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Returns the byte offset of the first malformed sequence, if any.
std::optional<std::size_t> first_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t min = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2, min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3, min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4, min = 0x10000;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    std::uint32_t cp = c & (0x7F >> len);
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::nullopt;
}

class Lexer {
 public:
  Lexer(std::string_view src, std::vector<ParseError>& errors)
      : src_(src), errors_(errors) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (c == '"') {
        lex_string(t);
      } else if (digit(c) || (c == '-' && digit(peek(1)))) {
        lex_int(t);
      } else if (c == '-' && peek(1) == '>') {
        advance();
        advance();
        t.kind = Tok::Arrow;
        t.text = "->";
      } else if (word_start(c)) {
        while (pos_ < src_.size() && word_char(src_[pos_])) {
          t.text += src_[pos_];
          advance();
        }
        t.kind = Tok::Word;
      } else {
        std::size_t start = pos_;
        advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        switch (c) {
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case ',': t.kind = Tok::Comma; break;
          case ':': t.kind = Tok::Colon; break;
          case '=': t.kind = Tok::Equals; break;
          default:
            t.kind = Tok::Invalid;
            errors_.push_back({t.loc.line, t.loc.column, "token",
                               "'" + t.text + "'"});
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  // Advances one byte; columns move only on code-point lead bytes.
  void advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if (c == '\r' && peek(0) == '\n') {
      // CR of a CRLF pair: the LF bumps the line.
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void lex_int(Token& t) {
    std::size_t start = pos_;
    if (src_[pos_] == '-') advance();
    while (pos_ < src_.size() && digit(src_[pos_])) advance();
    t.text = std::string(src_.substr(start, pos_ - start));
    auto [ptr, ec] =
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.value);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
      t.kind = Tok::Invalid;
      errors_.push_back(
          {t.loc.line, t.loc.column, "integer in range", t.text});
      return;
    }
    t.kind = Tok::Int;
  }

  void lex_string(Token& t) {
    advance();  // opening quote
    for (;;) {
      if (pos_ >= src_.size() || src_[pos_] == '\n' ||
          (src_[pos_] == '\r' && peek(1) == '\n')) {
        t.kind = Tok::Invalid;
        errors_.push_back({t.loc.line, t.loc.column, "closing '\"'",
                           pos_ >= src_.size() ? "end of input"
                                               : "end of line"});
        return;
      }
      char c = src_[pos_];
      if (c == '"') {
        advance();
        t.kind = Tok::String;
        return;
      }
      if (c != '\\') {
        t.text += c;
        advance();
        continue;
      }
      SourceLocation esc{line_, col_};
      advance();
      char e = pos_ < src_.size() ? src_[pos_] : '\0';
      switch (e) {
        case '"': t.text += '"'; advance(); break;
        case '\\': t.text += '\\'; advance(); break;
        case 'n': t.text += '\n'; advance(); break;
        case 't': t.text += '\t'; advance(); break;
        case 'r': t.text += '\r'; advance(); break;
        case 'u': {
          advance();
          std::uint32_t cp = 0;
          bool good = true;
          for (int k = 0; k < 4; ++k) {
            char h = pos_ < src_.size() ? src_[pos_] : '\0';
            int v = digit(h)                ? h - '0'
                    : (h >= 'a' && h <= 'f') ? h - 'a' + 10
                    : (h >= 'A' && h <= 'F') ? h - 'A' + 10
                                             : -1;
            if (v < 0) {
              good = false;
              break;
            }
            cp = cp * 16 + static_cast<std::uint32_t>(v);
            advance();
          }
          if (!good || (cp >= 0xD800 && cp <= 0xDFFF)) {
            errors_.push_back(
                {esc.line, esc.column, "four hex digits after \\u", "'\\u'"});
          } else {
            append_utf8(t.text, cp);
          }
          break;
        }
        default:
          errors_.push_back({esc.line, esc.column, "escape sequence",
                             std::string("'\\") + e + "'"});
          if (e != '\0' && e != '\n') advance();
      }
    }
  }

  std::string_view src_;
  std::vector<ParseError>& errors_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

bool is_top_keyword(const Token& t) {
  return t.kind == Tok::Word &&
         (t.text == "sink" || t.text == "meta" || t.text == "node" ||
          t.text == "edge" || t.text == "symbol");
}

struct Recover {};  // unwinds to the enclosing block's recovery point

struct PendingEdge {
  Edge edge;
  SourceLocation loc;
  SourceLocation from_loc;
  SourceLocation to_loc;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<ParseError>& errors)
      : toks_(std::move(tokens)), errors_(errors) {}

  ParseResult run() {
    ParseResult result;
    try {
      header();
    } catch (const Recover&) {
      result.errors = errors_;
      return result;
    }

    while (!at(Tok::RBrace) && !at(Tok::End)) {
      std::size_t start = i_;
      try {
        top_level();
      } catch (const Recover&) {
        skip_to_top_level();
      }
      if (i_ == start) ++i_;  // guarantee progress
    }
    SourceLocation close = cur().loc;
    if (at(Tok::End)) {
      error_here("'}' closing the syllabus");
    } else {
      ++i_;
      if (!at(Tok::End)) error_here("end of input");
    }

    semantic_checks(close);
    result.locations = std::move(map_);
    if (!errors_.empty()) {
      result.errors = errors_;
      return result;
    }
    try {
      result.graph.emplace(std::move(title_), std::move(*sink_),
                           std::move(nodes_), edges_out(),
                           std::move(glossary_), std::move(meta_));
    } catch (const InvariantError& e) {
      errors_.push_back({1, 1, "a graph satisfying model invariants",
                         e.what()});
      result.errors = errors_;
    }
    return result;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(std::string_view w) const {
    return at(Tok::Word) && cur().text == w;
  }

  void error_at(const Token& t, std::string expected) {
    // The lexer already reported invalid tokens.
    if (t.kind == Tok::Invalid) return;
    errors_.push_back({t.loc.line, t.loc.column, std::move(expected),
                       display(t)});
  }
  void error_here(std::string expected) { error_at(cur(), std::move(expected)); }

  [[noreturn]] void fail(std::string expected) {
    error_here(std::move(expected));
    throw Recover{};
  }

  const Token& expect(Tok k, std::string what) {
    if (!at(k)) fail(std::move(what));
    return toks_[i_++];
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) fail("'" + std::string(w) + "'");
    ++i_;
  }

  const Token& node_id(std::string what = "node id") {
    if (!at(Tok::Word) || !is_valid_node_id(cur().text)) fail(std::move(what));
    return toks_[i_++];
  }

  std::string nonempty_string(std::string what) {
    if (!at(Tok::String) || cur().text.empty()) fail(std::move(what));
    return toks_[i_++].text;
  }

  // A symbol key or meta key: a bare word or a quoted string.
  std::string key(std::string what) {
    if ((at(Tok::Word) || at(Tok::String)) && !cur().text.empty()) {
      return toks_[i_++].text;
    }
    fail(std::move(what));
  }

  int integer(std::string what, long long lo, long long hi) {
    if (!at(Tok::Int) || cur().value < lo || cur().value > hi) {
      fail(std::move(what));
    }
    return static_cast<int>(toks_[i_++].value);
  }

  void header() {
    if (at_word("syllagraph")) {
      ++i_;
      if (!at(Tok::Int) || cur().value != 1) {
        error_here("supported format version 1");
        if (at(Tok::Int)) ++i_;
      } else {
        ++i_;
      }
    }
    expect_word("syllabus");
    title_ = expect(Tok::String, "syllabus title string").text;
    expect(Tok::LBrace, "'{'");
  }

  void skip_to_top_level() {
    int depth = 0;
    while (!at(Tok::End)) {
      if (depth == 0 && (is_top_keyword(cur()) || at(Tok::RBrace))) return;
      if (at(Tok::LBrace)) ++depth;
      if (at(Tok::RBrace)) --depth;
      ++i_;
    }
  }

  void top_level() {
    if (!is_top_keyword(cur())) {
      fail("top-level directive (sink, meta, node, edge or symbol)");
    }
    const Token& kw = toks_[i_++];
    if (kw.text == "sink") {
      const Token& id = node_id();
      if (sink_) {
        error_at(kw, "a single sink declaration");
        return;
      }
      sink_ = id.text;
      sink_token_ = id;
      map_.sink = kw.loc;
    } else if (kw.text == "meta") {
      const Token& k = cur();
      std::string name = key("meta key");
      expect(Tok::Colon, "':'");
      if (!at(Tok::String)) fail("meta value string");
      std::string value = toks_[i_++].text;
      if (!meta_.emplace(name, value).second) error_at(k, "unique meta key");
    } else if (kw.text == "symbol") {
      const Token& k = cur();
      std::string name = nonempty_string("symbol key string");
      expect(Tok::Equals, "'='");
      std::string meaning = nonempty_string("symbol meaning string");
      if (!symbol_keys_.insert(name).second) {
        error_at(k, "unique symbol key");
        return;
      }
      glossary_.push_back({std::move(name), std::move(meaning)});
    } else if (kw.text == "edge") {
      edge_directive(kw);
    } else {
      node_block(kw);
    }
  }

  void edge_directive(const Token& kw) {
    PendingEdge pe;
    pe.loc = kw.loc;
    pe.from_loc = cur().loc;
    pe.edge.from = node_id().text;
    expect(Tok::Arrow, "'->'");
    pe.to_loc = cur().loc;
    pe.edge.to = node_id().text;
    expect(Tok::Colon, "':'");
    if (!at(Tok::Word) || !kind_from_string(cur().text)) {
      fail("relationship kind (derivative, common_part or perspective)");
    }
    pe.edge.kind = *kind_from_string(toks_[i_++].text);
    if (at(Tok::String)) {
      if (cur().text.find_first_not_of(" \t\r\n") == std::string::npos) {
        fail("non-blank edge note");
      }
      pe.edge.note = toks_[i_++].text;
    }
    edges_.push_back(std::move(pe));
  }

  void skip_to_block_end() {
    int depth = 1;
    while (!at(Tok::End)) {
      if (at(Tok::LBrace)) ++depth;
      if (at(Tok::RBrace) && --depth == 0) {
        ++i_;
        return;
      }
      ++i_;
    }
  }

  void node_block(const Token& kw) {
    const Token& id = node_id();
    Node node;
    node.id = id.text;
    bool duplicate = map_.nodes.contains(node.id);
    if (duplicate) {
      error_at(id, "unique node id");
    } else {
      map_.nodes[node.id] = kw.loc;
    }
    declared_.insert(node.id);
    expect(Tok::LBrace, "'{'");
    try {
      node_body(node, id);
    } catch (const Recover&) {
      skip_to_block_end();
      return;
    }
    if (!duplicate) nodes_.push_back(std::move(node));
  }

  void node_body(Node& node, const Token& id) {
    bool has_title = false, has_side = false, has_pos = false;
    auto once = [&](bool& flag, const Token& t) {
      if (flag) error_at(t, "a single '" + t.text + "' directive");
      flag = true;
    };
    while (!at(Tok::RBrace)) {
      if (!at(Tok::Word)) fail("node directive or '}'");
      const Token& d = toks_[i_++];
      expect(Tok::Colon, "':'");
      if (d.text == "title") {
        once(has_title, d);
        node.title = nonempty_string("nonempty title string");
      } else if (d.text == "side") {
        once(has_side, d);
        if (!at(Tok::Word) || !side_from_string(cur().text)) {
          fail("side (as, ad or other)");
        }
        node.side = *side_from_string(toks_[i_++].text);
      } else if (d.text == "pos") {
        once(has_pos, d);
        expect(Tok::LParen, "'('");
        node.pos.column = integer("grid column in [0, 999]", 0, kMaxGridCoord);
        expect(Tok::Comma, "','");
        node.pos.row = integer("grid row in [0, 999]", 0, kMaxGridCoord);
        expect(Tok::RParen, "')'");
      } else if (d.text == "chapter") {
        int lo = node.chapters.empty() ? 1 : node.chapters.back() + 1;
        node.chapters.push_back(integer(
            node.chapters.empty() ? "positive chapter number"
                                  : "chapter greater than " +
                                        std::to_string(node.chapters.back()),
            lo, 1'000'000));
      } else if (d.text == "uses") {
        node.symbols.push_back(key("symbol key"));
      } else if (auto kind = resource_kind_from_string(d.text)) {
        if (!at(Tok::String) || !(cur().text.starts_with("http://") ||
                                  cur().text.starts_with("https://"))) {
          fail("absolute http(s) URL string");
        }
        Resource res;
        res.kind = *kind;
        res.url = toks_[i_++].text;
        res.label = nonempty_string("nonempty resource label string");
        node.resources.push_back(std::move(res));
      } else if (d.text == "note") {
        if (node.note) error_at(d, "a single 'note' directive");
        if (!at(Tok::String)) fail("note string");
        node.note = toks_[i_++].text;
      } else {
        error_at(d,
                 "node directive (title, side, pos, chapter, uses, video, "
                 "text, audio or note)");
        throw Recover{};
      }
    }
    const Token& close = toks_[i_++];
    for (auto [flag, name] : {std::pair{has_title, "title"},
                              std::pair{has_side, "side"},
                              std::pair{has_pos, "pos"}}) {
      if (!flag) {
        errors_.push_back({close.loc.line, close.loc.column,
                           std::string("'") + name + "' directive in node " +
                               id.text,
                           "'}'"});
      }
    }
  }

  void semantic_checks(SourceLocation close) {
    if (!sink_) {
      errors_.push_back(
          {close.line, close.column, "sink declaration", "end of syllabus"});
    } else if (!declared_.contains(*sink_)) {
      error_at(sink_token_, "declared node id");
    }
    std::set<std::tuple<std::string, std::string, RelationshipKind>> seen;
    for (const auto& pe : edges_) {
      bool ok = true;
      if (!declared_.contains(pe.edge.from)) {
        errors_.push_back({pe.from_loc.line, pe.from_loc.column,
                           "declared node id", pe.edge.from});
        ok = false;
      }
      if (!declared_.contains(pe.edge.to)) {
        errors_.push_back({pe.to_loc.line, pe.to_loc.column,
                           "declared node id", pe.edge.to});
        ok = false;
      }
      if (!ok) continue;
      if (pe.edge.from == pe.edge.to) {
        errors_.push_back({pe.to_loc.line, pe.to_loc.column,
                           "edge target different from its source",
                           pe.edge.to});
      } else if (!seen.emplace(pe.edge.from, pe.edge.to, pe.edge.kind)
                      .second) {
        errors_.push_back({pe.loc.line, pe.loc.column,
                           "edge not already declared",
                           "duplicate edge " + pe.edge.from + " -> " +
                               pe.edge.to + " : " +
                               std::string(to_string(pe.edge.kind))});
      }
    }
    for (const auto& pe : edges_) map_.edges.push_back(pe.loc);
  }

  std::vector<Edge> edges_out() {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (auto& pe : edges_) out.push_back(std::move(pe.edge));
    return out;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  std::vector<ParseError>& errors_;

  std::string title_;
  std::optional<NodeId> sink_;
  Token sink_token_;
  std::vector<Node> nodes_;
  std::vector<PendingEdge> edges_;
  std::vector<SymbolEntry> glossary_;
  std::set<std::string> symbol_keys_;
  std::map<std::string, std::string> meta_;
  std::set<NodeId> declared_;
  SourceMap map_;
};

SourceLocation location_of_offset(std::string_view src, std::size_t offset) {
  SourceLocation loc;
  for (std::size_t i = 0; i < offset; ++i) {
    if (src[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else if (src[i] != '\r' &&
               (static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
      ++loc.column;
    }
  }
  return loc;
}

bool is_bare_word(std::string_view s) {
  if (s.empty() || !word_start(s.front())) return false;
  for (char c : s) {
    if (!word_char(c)) return false;
  }
  return true;
}

}  // namespace

ParseResult parse(std::string_view source) {
  std::vector<ParseError> errors;
  if (auto bad = first_invalid_utf8(source)) {
    auto loc = location_of_offset(source, *bad);
    ParseResult result;
    result.errors.push_back({loc.line, loc.column, "valid UTF-8 text",
                             "malformed byte sequence"});
    return result;
  }
  Lexer lexer(source, errors);
  auto tokens = lexer.run();
  Parser parser(std::move(tokens), errors);
  return parser.run();
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
          static constexpr char hex[] = "0123456789abcdef";
          out += "\\u00";
          out += hex[(c >> 4) & 0xF];
          out += hex[c & 0xF];
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string serialize(const CourseGraph& graph) {
  std::ostringstream out;
  out << "syllagraph 1\n";
  out << "syllabus " << quote(graph.title()) << " {\n";
  out << "  sink " << graph.sink_id() << "\n";
  for (const auto& [k, v] : graph.meta()) {
    out << "  meta " << (is_bare_word(k) ? k : quote(k)) << ": " << quote(v)
        << "\n";
  }
  for (const auto& s : graph.glossary()) {
    out << "  symbol " << quote(s.key) << " = " << quote(s.meaning) << "\n";
  }
  for (const auto& n : graph.nodes()) {
    out << "  node " << n.id << " {\n";
    out << "    title: " << quote(n.title) << "\n";
    out << "    side: " << to_string(n.side) << "\n";
    out << "    pos: (" << n.pos.column << ", " << n.pos.row << ")\n";
    for (int ch : n.chapters) out << "    chapter: " << ch << "\n";
    for (const auto& s : n.symbols) out << "    uses: " << quote(s) << "\n";
    for (const auto& r : n.resources) {
      out << "    " << to_string(r.kind) << ": " << quote(r.url) << " "
          << quote(r.label) << "\n";
    }
    if (n.note) out << "    note: " << quote(*n.note) << "\n";
    out << "  }\n";
  }
  for (const auto& e : graph.edges()) {
    out << "  edge " << e.from << " -> " << e.to << " : " << to_string(e.kind);
    if (e.note) out << " " << quote(*e.note);
    out << "\n";
  }
  out << "}\n";
  return out.str();
}

void attach_locations(std::vector<Diagnostic>& diagnostics,
                      const SourceMap& map) {
  for (auto& d : diagnostics) {
    if (d.location || !d.subject) continue;
    const auto& s = *d.subject;
    if (s.kind == Subject::Kind::Node) {
      if (auto it = map.nodes.find(s.node_id); it != map.nodes.end()) {
        d.location = it->second;
      }
    } else if (s.kind == Subject::Kind::Edge) {
      if (s.edge_index < map.edges.size()) {
        d.location = map.edges[s.edge_index];
      }
    } else if (map.sink) {
      d.location = map.sink;
    }
  }
}

}  // namespace syllagraph
