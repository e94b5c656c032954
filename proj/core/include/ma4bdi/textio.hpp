#pragma once
// Deterministic text-format primitives (field escaping, round-trip doubles,
// FNV-64 content checksums) plus instrumented file helpers. Every file the
// library touches goes through read_file/write_file so tests can assert the
// stream path performs zero file operations.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ma4bdi::textio {

// Global count of file operations performed through this module.
std::uint64_t file_ops();

std::string read_file(const std::string& path);                       // io-failure on error
void write_file(const std::string& path, std::string_view content);   // io-failure on error
bool file_exists(const std::string& path);
void ensure_directory(const std::string& path);

std::uint64_t fnv1a64(std::string_view data);

// %.17g: shortest text that round-trips an IEEE double exactly.
std::string fmt_double(double v);
double parse_double(std::string_view text);        // strict; out-of-range-field on junk
std::int64_t parse_int(std::string_view text);     // strict

// Tab/newline/backslash escaping for tab-separated record lines.
std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);
std::vector<std::string> split_tabs(std::string_view line);
std::vector<std::string> split_lines(std::string_view text);

// Checksum framing: seal appends a trailing "checksum <hex16>" line computed
// over the whole body; open verifies the leading magic line and the checksum
// and returns the body lines in between.
std::string seal_document(std::string body);
std::vector<std::string> open_document(std::string_view content, std::string_view magic);

}  // namespace ma4bdi::textio
