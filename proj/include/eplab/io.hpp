#pragma once

// Text output helpers: round-trippable number formatting and atomic writes.

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace eplab::io {

/// 17 significant digits, enough to round-trip any double.
[[nodiscard]] inline std::string num(double v) { return fmt::format("{:.17g}", v); }

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes `content` to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw OutputError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw OutputError("cannot rename into " + path.string());
  }
}

/// Files held in memory until commit(), so a failing command leaves nothing behind.
class StagedOutputs {
 public:
  void add(std::string name, std::string content) { files_[std::move(name)] = std::move(content); }

  [[nodiscard]] std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : files_) out.push_back(name);
    return out;
  }

  [[nodiscard]] const std::string& content(const std::string& name) const { return files_.at(name); }

  /// Writes every file into `dir`; returns the written paths.
  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) const {
    std::vector<std::filesystem::path> written;
    for (const auto& [name, content] : files_) {
      write_file_atomic(dir / name, content);
      written.push_back(dir / name);
    }
    return written;
  }

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace eplab::io
