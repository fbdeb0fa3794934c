#include "iecoregen/workspace.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "iecoregen/errors.hpp"

namespace iecoregen {

SampleWorkspace::SampleWorkspace(std::filesystem::path root)
    : root_(std::move(root)), enabled_(true) {
  std::filesystem::create_directories(root_);
}

void SampleWorkspace::write_text(const std::string& relative_path,
                                 const std::string& text) const {
  if (!enabled_) return;
  std::filesystem::path target = root_ / relative_path;
  if (target.has_parent_path())
    std::filesystem::create_directories(target.parent_path());
  std::ofstream out(target, std::ios::binary);
  if (!out) throw Error("cannot write artifact " + target.string());
  out << text;
}

std::string SampleWorkspace::read_text(
    const std::string& relative_path) const {
  std::ifstream in(root_ / relative_path, std::ios::binary);
  if (!in) throw Error("cannot read artifact " + relative_path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool SampleWorkspace::exists(const std::string& relative_path) const {
  return enabled_ && std::filesystem::exists(root_ / relative_path);
}

void SampleWorkspace::log_exchange(const std::string& stage,
                                   const std::string& class_id,
                                   const std::string& prompt,
                                   const std::string& response,
                                   const std::string& digest) {
  if (!enabled_) return;
  ++sequence_;
  char seq[16];
  std::snprintf(seq, sizeof seq, "%03d", sequence_);
  std::string base = "prompts/" + std::string(seq) + "_" + stage;
  if (!class_id.empty()) base += "_" + class_id;
  write_text(base + ".prompt.txt", prompt);
  write_text(base + ".response.txt", response);

  nlohmann::json line = {{"seq", sequence_},
                         {"stage", stage},
                         {"classId", class_id},
                         {"digest", digest}};
  std::filesystem::path calls = root_ / "calls.jsonl";
  std::ofstream out(calls, std::ios::app);
  if (!out) throw Error("cannot write " + calls.string());
  out << line.dump() << "\n";
}

}  // namespace iecoregen
