#include "denot/chess/pgn.hpp"

#include <cctype>
#include <iterator>
#include <sstream>

#include "denot/chess/movegen.hpp"
#include "denot/chess/san.hpp"

namespace denot::chess {
namespace {

bool is_result(std::string_view tok) {
  return tok == "1-0" || tok == "0-1" || tok == "1/2-1/2" || tok == "*";
}

// Strips a leading move number ("12.", "12...", "12.e4") and returns the rest.
std::string_view strip_move_number(std::string_view tok) {
  std::size_t i = 0;
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
  if (i == 0 || i == tok.size() || tok[i] != '.') return tok;
  while (i < tok.size() && tok[i] == '.') ++i;
  return tok.substr(i);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  PgnParseResult run() {
    while (pos_ < text_.size()) {
      skip_space();
      if (pos_ >= text_.size()) break;
      const char c = text_[pos_];
      if (c == '[') {
        if (in_movetext_) finish_game();
        read_tag();
      } else if (c == '{') {
        skip_until('}');
      } else if (c == ';') {
        skip_until('\n');
      } else if (c == '%' && (pos_ == 0 || text_[pos_ - 1] == '\n')) {
        skip_until('\n');
      } else if (c == '(') {
        skip_variation();
      } else if (c == ')') {
        ++pos_;  // stray close paren
      } else {
        read_token();
      }
    }
    if (in_movetext_ || !current_.tags.empty()) finish_game();
    return std::move(result_);
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void skip_until(char end) {
    const auto found = text_.find(end, pos_);
    pos_ = found == std::string_view::npos ? text_.size() : found + 1;
  }

  void skip_variation() {
    int depth = 0;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '{') {
        skip_until('}');
        continue;
      }
      ++pos_;
      if (c == '(') ++depth;
      else if (c == ')' && --depth == 0) return;
    }
  }

  void read_tag() {
    const auto line_end = text_.find('\n', pos_);
    const auto close = text_.find(']', pos_);
    if (close == std::string_view::npos || (line_end != std::string_view::npos && close > line_end)) {
      mark_bad("malformed tag pair near offset " + std::to_string(pos_));
      pos_ = line_end == std::string_view::npos ? text_.size() : line_end + 1;
      return;
    }
    const std::string_view body = text_.substr(pos_ + 1, close - pos_ - 1);
    pos_ = close + 1;
    const auto q1 = body.find('"');
    const auto q2 = body.rfind('"');
    if (q1 == std::string_view::npos || q2 == q1) {
      mark_bad("tag pair without quoted value: [" + std::string(body) + "]");
      return;
    }
    std::string name(body.substr(0, q1));
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.erase(name.begin());
    if (name.empty()) {
      mark_bad("tag pair without name");
      return;
    }
    std::string value(body.substr(q1 + 1, q2 - q1 - 1));
    if (name == "FEN" && !bad_) {
      try {
        board_ = Board::from_fen(value);
        current_.game.initial = board_;
      } catch (const BoardError& e) {
        mark_bad(std::string("bad FEN tag: ") + e.what());
      }
    }
    current_.tags[name] = std::move(value);
  }

  void read_token() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '(' || c == ')' || c == '[' || c == ';') break;
      ++pos_;
    }
    std::string_view tok = text_.substr(start, pos_ - start);
    if (tok.empty()) {
      ++pos_;
      return;
    }
    in_movetext_ = true;
    if (is_result(tok)) {
      finish_game();
      return;
    }
    if (tok[0] == '$') return;
    tok = strip_move_number(tok);
    if (tok.empty() || std::isdigit(static_cast<unsigned char>(tok[0]))) return;
    if (tok == "!" || tok == "?" || tok == "!!" || tok == "??" || tok == "!?" || tok == "?!") return;
    if (bad_) return;
    const auto move = parse_san(board_, tok);
    if (!move) {
      mark_bad("illegal or unparseable move '" + std::string(tok) + "' at ply " +
               std::to_string(current_.game.moves.size() + 1));
      return;
    }
    current_.game.moves.push_back(*move);
    board_ = apply_move(board_, *move);
  }

  void mark_bad(std::string why) {
    if (!bad_) result_.warnings.push_back("game " + std::to_string(game_index_ + 1) + ": " + std::move(why));
    bad_ = true;
  }

  void finish_game() {
    if (bad_) ++result_.skipped_games;
    else if (in_movetext_ || !current_.game.moves.empty()) result_.games.push_back(std::move(current_));
    ++game_index_;
    current_ = PgnGame{};
    board_ = Board::initial();
    bad_ = false;
    in_movetext_ = false;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  PgnParseResult result_;
  PgnGame current_;
  Board board_ = Board::initial();
  bool bad_ = false;
  bool in_movetext_ = false;
  std::size_t game_index_ = 0;
};

}  // namespace

PgnParseResult parse_pgn(std::string_view text) { return Parser(text).run(); }

PgnParseResult parse_pgn(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_pgn(text);
}

std::string write_pgn(const Game& game, const std::map<std::string, std::string>& tags, std::string_view result) {
  std::ostringstream out;
  for (const auto& [k, v] : tags) out << '[' << k << " \"" << v << "\"]\n";
  out << '\n';
  Board b = game.initial;
  int line = 0;
  auto emit = [&](const std::string& tok) {
    if (line + tok.size() + 1 > 79) {
      out << '\n';
      line = 0;
    } else if (line > 0) {
      out << ' ';
      ++line;
    }
    out << tok;
    line += static_cast<int>(tok.size());
  };
  int move_no = 1;
  bool first = true;
  for (const auto& m : game.moves) {
    if (b.side_to_move() == Color::White) emit(std::to_string(move_no) + ".");
    else if (first) emit(std::to_string(move_no) + "...");
    emit(to_san(b, m));
    if (b.side_to_move() == Color::Black) ++move_no;
    b = apply_move(b, m);
    first = false;
  }
  emit(std::string(result));
  out << "\n\n";
  return out.str();
}

std::vector<std::pair<Board, MoveRecord>> derive_positions(const Game& game, std::size_t* illegal_moves) {
  std::vector<std::pair<Board, MoveRecord>> out;
  out.reserve(game.moves.size());
  Board b = game.initial;
  for (const auto& m : game.moves) {
    if (!is_legal(b, m)) {
      if (illegal_moves) ++*illegal_moves;
      break;
    }
    out.emplace_back(b, m);
    b = apply_move(b, m);
  }
  return out;
}

std::vector<Board> parse_fen_list(std::string_view text, std::vector<std::string>* warnings) {
  std::vector<Board> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    try {
      out.push_back(Board::from_fen(line));
    } catch (const BoardError& e) {
      if (warnings) warnings->push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace denot::chess
