#include "nbody_cli/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "nbody_cli/config.hpp"

namespace nbody::cli {

std::string format_number(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::string format_row(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(values[i]);
  }
  return out;
}

std::vector<double> parse_row(std::string_view line) {
  const auto groups = parse_groups(line);
  return groups.empty() ? std::vector<double>{} : groups.front();
}

std::string reformat_csv(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (header) {
      out += line;
      header = false;
    } else {
      out += format_row(parse_row(line));
    }
    out += '\n';
  }
  return out;
}

void write_atomically(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + tmp.string() + "'");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) {
      f.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw ConfigError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path + "'");
  }
}

}  // namespace nbody::cli
