#include "pci/csv.hpp"

#include <cstring>
#include <stdexcept>

#include "pci/types.hpp"

namespace pci::csv {

std::string escape(std::string_view field) {
  bool needs_quote = false;
  for (char c : field) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs_quote = true;
      break;
    }
  }
  if (!field.empty() && (field.front() == ' ' || field.back() == ' '))
    needs_quote = true;
  if (!needs_quote) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool split(std::string_view line, std::vector<std::string>& out) {
  out.clear();
  std::string cur;
  bool in_quotes = false;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      in_quotes = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
    ++i;
  }
  if (in_quotes) return false;
  out.push_back(std::move(cur));
  return true;
}

Writer::Writer(const std::filesystem::path& path, std::string_view provenance,
               std::string_view header)
    : path_(path) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw DataError("cannot open for writing: " + path.string());
  buf_.reserve(1 << 20);
  if (!provenance.empty()) {
    buf_.append(provenance);
    buf_.push_back('\n');
  }
  if (!header.empty()) {
    buf_.append(header);
    buf_.push_back('\n');
  }
}

Writer::~Writer() {
  if (file_) close();
}

void Writer::flush_buf() {
  if (!buf_.empty()) {
    if (std::fwrite(buf_.data(), 1, buf_.size(), file_) != buf_.size())
      throw DataError("write failed: " + path_.string());
    buf_.clear();
  }
}

void Writer::write_line(std::string_view line) {
  buf_.append(line);
  buf_.push_back('\n');
  if (buf_.size() > (1 << 20)) flush_buf();
}

void Writer::write_row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) buf_.push_back(',');
    buf_.append(escape(fields[i]));
  }
  buf_.push_back('\n');
  if (buf_.size() > (1 << 20)) flush_buf();
}

void Writer::close() {
  flush_buf();
  std::fclose(file_);
  file_ = nullptr;
}

void for_each_row(
    const std::filesystem::path& path,
    const std::function<void(const std::vector<std::string>&)>& on_header,
    const std::function<void(const std::vector<std::string>&, std::size_t)>&
        on_row) {
  struct Closer {
    std::FILE* f;
    ~Closer() {
      if (f) std::fclose(f);
    }
  } file{std::fopen(path.c_str(), "rb")};
  if (!file.f) throw DataError("cannot open: " + path.string());
  std::vector<std::string> fields;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  char buf[1 << 16];
  std::string pending;
  const auto handle_line = [&](std::string& l) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    ++lineno;
    if (l.empty() || l[0] == '#') return;
    if (!split(l, fields))
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": unbalanced quotes");
    if (!have_header) {
      have_header = true;
      if (on_header) on_header(fields);
    } else {
      on_row(fields, lineno);
    }
  };
  while (true) {
    const std::size_t n = std::fread(buf, 1, sizeof(buf), file.f);
    if (n == 0) break;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (buf[i] != '\n') continue;
      line.assign(pending);
      line.append(buf + start, i - start);
      pending.clear();
      start = i + 1;
      handle_line(line);
    }
    pending.append(buf + start, n - start);
  }
  if (!pending.empty()) handle_line(pending);
}

std::vector<std::string> for_each_row(
    const std::filesystem::path& path,
    const std::function<void(const std::vector<std::string>&, std::size_t)>&
        on_row) {
  std::vector<std::string> header;
  for_each_row(
      path, [&](const std::vector<std::string>& h) { header = h; }, on_row);
  return header;
}

}  // namespace pci::csv
