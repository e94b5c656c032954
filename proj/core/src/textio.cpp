#include "ma4bdi/textio.hpp"

#include <atomic>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ma4bdi/error.hpp"

namespace ma4bdi::textio {

namespace {
std::atomic<std::uint64_t> g_file_ops{0};
}

std::uint64_t file_ops() { return g_file_ops.load(); }

std::string read_file(const std::string& path) {
  g_file_ops.fetch_add(1);
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) {
    throw Error(ErrorKind::io_failure, "cannot open '" + path + "' for reading");
  }
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorKind::io_failure, "read failed on '" + path + "'");
  }
  return std::move(out).str();
}

void write_file(const std::string& path, std::string_view content) {
  g_file_ops.fetch_add(1);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.is_open()) {
    throw Error(ErrorKind::io_failure, "cannot open '" + path + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out.good()) {
    throw Error(ErrorKind::io_failure, "write failed on '" + path + "'");
  }
}

bool file_exists(const std::string& path) {
  g_file_ops.fetch_add(1);
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

void ensure_directory(const std::string& path) {
  g_file_ops.fetch_add(1);
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) {
    throw Error(ErrorKind::io_failure,
                "cannot create directory '" + path + "': " + ec.message());
  }
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text) {
  std::string s(text);
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end != begin + s.size() || s.empty() || errno == ERANGE) {
    throw Error(ErrorKind::out_of_range_field, "'" + s + "' is not a number");
  }
  return v;
}

std::int64_t parse_int(std::string_view text) {
  std::string s(text);
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(begin, &end, 10);
  if (end != begin + s.size() || s.empty() || errno == ERANGE) {
    throw Error(ErrorKind::out_of_range_field, "'" + s + "' is not an integer");
  }
  return v;
}

std::string escape_field(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default:   out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (i + 1 >= escaped.size()) {
      throw Error(ErrorKind::corrupt_views, "dangling escape in field");
    }
    switch (escaped[++i]) {
      case '\\': out += '\\'; break;
      case 't':  out += '\t'; break;
      case 'n':  out += '\n'; break;
      case 'r':  out += '\r'; break;
      default:
        throw Error(ErrorKind::corrupt_views, "unknown escape in field");
    }
  }
  return out;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '\t') {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      out.emplace_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (start < text.size()) out.emplace_back(text.substr(start));
  return out;
}

std::string seal_document(std::string body) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "checksum %016llx\n",
                static_cast<unsigned long long>(fnv1a64(body)));
  body += buf;
  return body;
}

std::vector<std::string> open_document(std::string_view content, std::string_view magic) {
  auto lines = split_lines(content);
  if (lines.size() < 2) {
    throw Error(ErrorKind::corrupt_views,
                "document too short for '" + std::string(magic) + "'");
  }
  const std::string& last = lines.back();
  if (last.rfind("checksum ", 0) != 0 || last.size() != 9 + 16) {
    throw Error(ErrorKind::corrupt_views, "missing checksum line");
  }
  // checksum covers everything before its own line
  const std::size_t body_len = content.size() - (last.size() + 1);
  const std::uint64_t want = std::strtoull(last.c_str() + 9, nullptr, 16);
  const std::uint64_t got = fnv1a64(content.substr(0, body_len));
  if (want != got) {
    throw Error(ErrorKind::corrupt_views, "checksum mismatch");
  }
  if (lines.front() != magic) {
    throw Error(ErrorKind::corrupt_views,
                "expected header '" + std::string(magic) + "', found '" + lines.front() + "'");
  }
  lines.pop_back();                 // checksum
  lines.erase(lines.begin());      // magic
  return lines;
}

}  // namespace ma4bdi::textio
