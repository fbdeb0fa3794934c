#include "iecoregen/external_tool.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <map>
#include <regex>
#include <thread>

#include "iecoregen/errors.hpp"

namespace iecoregen {

ToolRun run_tool(const std::string& command,
                 const std::filesystem::path& workdir, int timeout_seconds) {
  int pipe_fds[2];
  if (pipe(pipe_fds) != 0) throw Error("pipe() failed");

  pid_t pid = fork();
  if (pid < 0) {
    close(pipe_fds[0]);
    close(pipe_fds[1]);
    throw Error("fork() failed");
  }
  if (pid == 0) {
    // Child: run the command via the shell with stdout+stderr captured.
    close(pipe_fds[0]);
    dup2(pipe_fds[1], STDOUT_FILENO);
    dup2(pipe_fds[1], STDERR_FILENO);
    close(pipe_fds[1]);
    if (!workdir.empty() && chdir(workdir.c_str()) != 0) _exit(126);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }

  close(pipe_fds[1]);
  fcntl(pipe_fds[0], F_SETFL, O_NONBLOCK);

  ToolRun run;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::seconds(timeout_seconds);
  bool exited = false;
  int status = 0;
  char buffer[4096];
  while (true) {
    ssize_t n = read(pipe_fds[0], buffer, sizeof buffer);
    while (n > 0) {
      run.output.append(buffer, static_cast<std::size_t>(n));
      n = read(pipe_fds[0], buffer, sizeof buffer);
    }
    pid_t waited = waitpid(pid, &status, WNOHANG);
    if (waited == pid) {
      exited = true;
      break;
    }
    if (std::chrono::steady_clock::now() >= deadline) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  if (!exited) {
    kill(pid, SIGKILL);
    waitpid(pid, &status, 0);
    run.timed_out = true;
  }
  // Drain whatever is left in the pipe.
  ssize_t n = read(pipe_fds[0], buffer, sizeof buffer);
  while (n > 0) {
    run.output.append(buffer, static_cast<std::size_t>(n));
    n = read(pipe_fds[0], buffer, sizeof buffer);
  }
  close(pipe_fds[0]);

  if (WIFEXITED(status)) run.exit_code = WEXITSTATUS(status);
  else run.exit_code = -1;
  return run;
}

DiagnosticKind classify_message(const std::string& message) {
  std::string low;
  low.reserve(message.size());
  for (char c : message)
    low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto has = [&](const char* needle) {
    return low.find(needle) != std::string::npos;
  };
  if (has("syntax") || has("expected") || has("unterminated") || has("parse"))
    return DiagnosticKind::Syntax;
  if (has("unresolved") || has("undeclared") || has("undefined") ||
      has("unknown name") || has("unknown class") || has("no method") ||
      has("no field") || has("not declared") || has("cannot find"))
    return DiagnosticKind::UnresolvedSymbol;
  if (has("type") || has("incompatible") || has("mismatch") ||
      has("cannot assign") || has("cannot convert"))
    return DiagnosticKind::TypeMismatch;
  return DiagnosticKind::Other;
}

namespace {

// Translates (?<name>...) groups into plain capturing groups, recording
// each name's group index (std::regex has no named captures).
std::string translate_named_groups(const std::string& pattern,
                                   std::map<std::string, int>& indices) {
  std::string out;
  out.reserve(pattern.size());
  int group = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    char c = pattern[i];
    if (c == '\\' && i + 1 < pattern.size()) {
      out += c;
      out += pattern[++i];
      continue;
    }
    if (c != '(') {
      out += c;
      continue;
    }
    if (i + 2 < pattern.size() && pattern[i + 1] == '?' &&
        pattern[i + 2] == '<') {
      std::size_t close = pattern.find('>', i + 3);
      if (close == std::string::npos)
        throw ConfigError("unterminated (?<name> in diagnostic pattern");
      std::string name = pattern.substr(i + 3, close - i - 3);
      indices[name] = ++group;
      out += '(';
      i = close;
      continue;
    }
    if (i + 1 < pattern.size() && pattern[i + 1] == '?') {
      out += c;  // non-capturing or lookaround group
      continue;
    }
    ++group;
    out += c;
  }
  return out;
}

}  // namespace

CompileResult external_compile(const std::vector<SourceUnit>& units,
                               const ToolConfig& config,
                               const std::filesystem::path& workspace_dir) {
  std::filesystem::create_directories(workspace_dir);
  std::string file_list;
  for (const auto& unit : units) {
    std::filesystem::path target = workspace_dir / unit.path;
    if (target.has_parent_path())
      std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    if (!out) throw Error("cannot write " + target.string());
    out << unit.text;
    if (!file_list.empty()) file_list += " ";
    file_list += "'" + unit.path + "'";
  }

  std::string command = config.command_template;
  auto placeholder = command.find("{files}");
  if (placeholder == std::string::npos)
    throw ConfigError("tool command template has no {files} placeholder");
  command.replace(placeholder, 7, file_list);

  ToolRun run = run_tool(command, workspace_dir, config.timeout_seconds);
  if (run.timed_out) throw ToolTimeoutError(config.timeout_seconds);
  if (run.exit_code == 127) {
    throw ToolNotFoundError("tool not found: " + config.command_template);
  }

  std::map<std::string, int> group_index;
  std::string translated =
      translate_named_groups(config.diagnostic_pattern, group_index);
  for (const char* required : {"path", "line", "message"}) {
    if (!group_index.count(required)) {
      throw ConfigError(std::string("diagnostic pattern lacks the (?<") +
                        required + "> capture");
    }
  }
  std::regex pattern(translated);

  CompileResult result;
  auto begin =
      std::sregex_iterator(run.output.begin(), run.output.end(), pattern);
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const std::smatch& match = *it;
    Diagnostic d;
    d.path = match[static_cast<std::size_t>(group_index["path"])].str();
    d.message = match[static_cast<std::size_t>(group_index["message"])].str();
    try {
      d.line = std::stoi(
          match[static_cast<std::size_t>(group_index["line"])].str());
    } catch (const std::exception&) {
      d.line = 1;
    }
    if (d.line < 1) d.line = 1;
    d.kind = classify_message(d.message);
    std::ifstream file(workspace_dir / d.path, std::ios::binary);
    if (file) {
      std::string text((std::istreambuf_iterator<char>(file)),
                       std::istreambuf_iterator<char>());
      d.source_line = line_at(text, d.line);
    }
    result.diagnostics.push_back(std::move(d));
  }

  if (result.diagnostics.empty() && run.exit_code != 0) {
    throw PatternMismatchError(run.output);
  }
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     if (a.path != b.path) return a.path < b.path;
                     return a.line < b.line;
                   });
  result.ok = result.diagnostics.empty();
  return result;
}

}  // namespace iecoregen

namespace iecoregen {

ExternalToolBackend::ExternalToolBackend(const Backend& inner,
                                         ToolConfig config,
                                         std::filesystem::path scratch_root)
    : inner_(inner),
      config_(std::move(config)),
      scratch_root_(std::move(scratch_root)) {}

CompileResult ExternalToolBackend::compile_check(
    const std::vector<SourceUnit>& units) const {
  std::filesystem::path workspace =
      scratch_root_ /
      ("compile" + std::to_string(next_workspace_.fetch_add(1)));
  std::filesystem::remove_all(workspace);
  CompileResult result = external_compile(units, config_, workspace);
  std::error_code ec;
  std::filesystem::remove_all(workspace, ec);
  return result;
}

}  // namespace iecoregen
