#ifndef GASNET_REPORT_H_
#define GASNET_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "gasnet/network.h"
#include "gasnet/restoration.h"
#include "gasnet/significance.h"

namespace gasnet {

enum class Format { kTable, kJson, kCsv };

Format parse_format(const std::string& name);

// Four decimals, never "-0.0000".
std::string fixed4(double v);

// Per-node outage table for one disrupted state.
std::string render_dom(const Network& net, const OperationState& nom, const std::string& label,
                       const OperationState& dom, Format format);

struct RestoreView {
  std::string label;
  OperationState dom;
  OperationState rrom;
  std::optional<OperationState> raom;
  RestorationSolution rerouting;
  std::optional<RestorationSolution> reservoir;
  std::optional<double> ratio;
};

std::string render_restore(const Network& net, const OperationState& nom, const RestoreView& view,
                           Format format);

std::string render_significance(const Network& net, const std::vector<ScenarioResult>& results,
                                const SignificanceReport& report, Format format);

}  // namespace gasnet

#endif  // GASNET_REPORT_H_
