#ifndef DAO_CLI_HPP
#define DAO_CLI_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dao::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kIncompleteGrid = 3 };

// Parses "5..100" (step 1), "5..100:5", single values and comma-separated
// mixes of those.
std::vector<long> parse_int_list(std::string_view text);

// Entry point for the `dao` executable: gen, run, report, lid, score, knn-cache.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dao::cli

#endif // DAO_CLI_HPP
