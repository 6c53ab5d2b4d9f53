#ifndef GASNET_NETWORK_IO_H_
#define GASNET_NETWORK_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gasnet/network.h"

namespace gasnet {

inline constexpr int kFormatVersion = 1;

struct NetworkDocument {
  Network network;
  OperationState nom;
};

// Input file rejected by load_network. `problems` holds one entry per
// violation or parse failure; what() joins them.
class DocumentError : public InputError {
 public:
  explicit DocumentError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Shortest decimal string that parses back to exactly `v`.
std::string format_volume(double v);
double parse_volume(std::string_view text);

// Parses the JSON network format without checking acyclicity or the NOM.
NetworkDocument parse_network_document(std::string_view text);
NetworkDocument read_network_document(const std::filesystem::path& path);

// read_network_document plus acyclicity and NOM validation. A cyclic network
// is reported with its cycle and a pointer to the strip-cycles command.
NetworkDocument load_network(const std::filesystem::path& path);
void validate_document(const NetworkDocument& doc);

std::string serialize_network(const Network& net, const OperationState& nom);

}  // namespace gasnet

#endif  // GASNET_NETWORK_IO_H_
