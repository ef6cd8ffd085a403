// wkam command-line front end. Links the shared library through the C API
// only; all numerics live behind the opaque handles.

#include <stdio.h>
#include <string.h>

#include <string>
#include <vector>

#include "wkam/wkam.h"

namespace {

const char* kUsage =
    "usage: wkam <subcommand> [--config FILE] [--grid N] [--eps LIST] [--tol X]\n"
    "            [--seed S] [--out DIR] [--set section.key=value]\n"
    "\n"
    "subcommands:\n"
    "  check           verify the structural assumptions of the configured problem\n"
    "  ergodic         solve the stationary problem (lambda, v)\n"
    "  cauchy          regularized evolution sweep over the eps list\n"
    "  adjoint         backward transport densities for the eps list\n"
    "  mather-lp       action-minimizing measure by linear programming\n"
    "  mather-adjoint  action-minimizing measure from the adjoint density\n"
    "  compare         comparison-principle check for anchored solutions\n"
    "  uniqueness-set  sampled uniqueness set from the optimal face\n"
    "  suite           full verification battery (one line per criterion)\n"
    "\n"
    "exit status: 0 success, 1 verification failure, 2 configuration error\n";

// minimal JSON scraping for the suite listing: pulls "id"/"name"/"pass"
// fields per criteria entry without a JSON dependency in the tool
void print_suite_lines(const std::string& json) {
  size_t at = json.find("\"criteria\"");
  if (at == std::string::npos) return;
  while ((at = json.find("\"detail\"", at)) != std::string::npos) {
    const size_t id_at = json.find("\"id\"", at);
    const size_t name_at = json.find("\"name\"", at);
    const size_t pass_at = json.find("\"pass\"", at);
    if (id_at == std::string::npos || name_at == std::string::npos ||
        pass_at == std::string::npos)
      break;
    const int id = atoi(json.c_str() + json.find(':', id_at) + 1);
    const size_t nq1 = json.find('"', json.find(':', name_at) + 1);
    const size_t nq2 = json.find('"', nq1 + 1);
    const bool pass = json.compare(json.find(':', pass_at) + 2, 4, "true") == 0;
    printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", id,
           json.substr(nq1 + 1, nq2 - nq1 - 1).c_str());
    at = pass_at + 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    fputs(kUsage, stderr);
    return 2;
  }
  const std::string sub = argv[1];
  if (sub == "-h" || sub == "--help" || sub == "help") {
    fputs(kUsage, stdout);
    return 0;
  }

  const char* config_path = nullptr;
  std::vector<std::string> overrides;
  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    auto need_value = [&](const char* flag) -> const char* {
      if (i + 1 >= argc) {
        fprintf(stderr, "wkam: %s needs a value\n", flag);
        exit(2);
      }
      return argv[++i];
    };
    if (arg == "--config") config_path = need_value("--config");
    else if (arg == "--grid") overrides.push_back(std::string("grid=") + need_value("--grid"));
    else if (arg == "--eps") overrides.push_back(std::string("eps=") + need_value("--eps"));
    else if (arg == "--tol") overrides.push_back(std::string("tol=") + need_value("--tol"));
    else if (arg == "--seed") overrides.push_back(std::string("seed=") + need_value("--seed"));
    else if (arg == "--out") overrides.push_back(std::string("out=") + need_value("--out"));
    else if (arg == "--set") overrides.push_back(need_value("--set"));
    else {
      fprintf(stderr, "wkam: unknown flag '%s'\n%s", arg.c_str(), kUsage);
      return 2;
    }
  }

  std::vector<const char*> override_ptrs;
  for (const std::string& s : overrides) override_ptrs.push_back(s.c_str());

  char* summary = nullptr;
  int exit_code = 0;
  const int rc = wkam_run(sub.c_str(), config_path, override_ptrs.data(),
                          static_cast<int>(override_ptrs.size()), &summary, &exit_code);
  if (summary) {
    if (sub == "suite") print_suite_lines(summary);
    fputs(summary, stdout);
    fputc('\n', stdout);
    wkam_string_free(summary);
  }
  if (rc != WKAM_OK && rc != WKAM_ERR_VERIFY) {
    fprintf(stderr, "wkam: %s: %s\n", wkam_status_name(rc), wkam_last_error());
  }
  return exit_code;
}
