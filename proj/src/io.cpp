#include "usched/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace usched {

ParseError::ParseError(int line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

namespace {

struct Line {
  int number;
  std::vector<std::string_view> words;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    ++number;
    pos = eol + 1;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t') ++j;
      if (j > i) line.words.push_back(raw.substr(i, j - i));
      i = j;
    }
    if (line.words.empty() || line.words.front().front() == '#') continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

long long to_integer(const Line& line, std::size_t index) {
  std::string_view word = line.words[index];
  long long value = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc{} || ptr != word.data() + word.size()) {
    throw ParseError(line.number, "expected an integer, got '" +
                                      std::string(word) + "'");
  }
  return value;
}

void expect(const Line& line, std::string_view keyword, std::size_t arity) {
  if (line.words[0] != keyword || line.words.size() != arity + 1) {
    throw ParseError(line.number, "expected '" + std::string(keyword) + "' with " +
                                      std::to_string(arity) + " argument(s)");
  }
}

}  // namespace

Instance parse_instance(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.size() < 2) throw ParseError(0, "missing 'jobs' or 'machines' line");

  expect(lines[0], "jobs", 1);
  long long n = to_integer(lines[0], 1);
  if (n < 0 || n > 1'000'000) throw ParseError(lines[0].number, "bad job count");
  expect(lines[1], "machines", 1);
  long long m = to_integer(lines[1], 1);
  if (m < 1 || m > 1'000'000) throw ParseError(lines[1].number, "machine count must be >= 1");

  std::vector<Edge> edges;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    expect(lines[i], "edge", 2);
    long long u = to_integer(lines[i], 1);
    long long v = to_integer(lines[i], 2);
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw ParseError(lines[i].number, "edge endpoint outside [0, " +
                                            std::to_string(n) + ")");
    }
    edges.push_back({static_cast<JobId>(u), static_cast<JobId>(v)});
  }
  return Instance::build(static_cast<int>(n), static_cast<int>(m), edges);
}

std::string emit_instance(const Instance& inst) {
  std::ostringstream out;
  out << "jobs " << inst.n() << "\n";
  out << "machines " << inst.m() << "\n";
  for (const Edge& e : inst.reduction_edges()) {
    out << "edge " << e.pred << " " << e.succ << "\n";
  }
  return out.str();
}

Schedule parse_schedule(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.empty()) throw ParseError(0, "missing 'makespan' line");
  expect(lines[0], "makespan", 1);
  long long horizon = to_integer(lines[0], 1);
  if (horizon < 0) throw ParseError(lines[0].number, "negative makespan");

  Schedule sched(static_cast<Slot>(horizon));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    expect(lines[i], "job", 2);
    long long j = to_integer(lines[i], 1);
    long long t = to_integer(lines[i], 2);
    if (!sched.try_assign(static_cast<JobId>(j), static_cast<Slot>(t))) {
      throw ParseError(lines[i].number, "duplicate line for job " + std::to_string(j));
    }
  }
  return sched;
}

std::string emit_schedule(const Schedule& sched) {
  std::ostringstream out;
  out << "makespan " << sched.horizon() << "\n";
  for (const auto& [j, t] : sched.starts()) out << "job " << j << " " << t << "\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << contents;
}

}  // namespace usched
