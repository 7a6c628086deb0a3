#include "text_util.hpp"

#include <fstream>

#include <fmt/format.h>

#include "fcas/error.hpp"

namespace fcas::detail {

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
  }
  out << content;
  if (!out) {
    throw Error(ErrorCode::Io, fmt::format("write failed for '{}'", path.string()));
  }
}

}  // namespace fcas::detail
