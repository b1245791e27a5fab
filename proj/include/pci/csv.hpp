#ifndef PCI_CSV_HPP
#define PCI_CSV_HPP

#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace pci::csv {

// Quotes a field only when it contains a comma, quote, or leading/trailing
// whitespace. Fields may not contain control characters.
std::string escape(std::string_view field);

// Splits one CSV line into fields, honoring double-quote escaping.
// Returns false on unbalanced quotes.
bool split(std::string_view line, std::vector<std::string>& out);

// Buffered line-oriented writer. The provenance line and header are written
// on open; rows are appended with write_row / write_line.
class Writer {
 public:
  Writer(const std::filesystem::path& path, std::string_view provenance,
         std::string_view header);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void write_line(std::string_view line);
  void write_row(const std::vector<std::string>& fields);
  void close();

 private:
  std::FILE* file_ = nullptr;
  std::filesystem::path path_;
  std::string buf_;
  void flush_buf();
};

// Streams a CSV file line by line, skipping leading '#' comment lines.
// `on_row` receives the parsed fields and the 1-based physical line number.
// The first non-comment line is treated as the header and returned.
std::vector<std::string> for_each_row(
    const std::filesystem::path& path,
    const std::function<void(const std::vector<std::string>&, std::size_t)>&
        on_row);

// Same, but hands the header to on_header before any row is delivered,
// so callers can validate the schema up front.
void for_each_row(
    const std::filesystem::path& path,
    const std::function<void(const std::vector<std::string>&)>& on_header,
    const std::function<void(const std::vector<std::string>&, std::size_t)>&
        on_row);

}  // namespace pci::csv

#endif
