#pragma once

#include <string>
#include <vector>

#include "bleip/metrics.hpp"

namespace bleip::csvio {

/// puts.csv: id,producer,send_us,ack_us,hops — ack_us is LOST for packets
/// with no acknowledgement. Times are integer microseconds.
void write_puts_csv(const MetricsLog& log, const std::string& path);

/// nodes.csv: node,tx_us,rx_us,frames_tx,frames_rx,dropped_adv_events,
/// queue_drops,duplicates
void write_nodes_csv(const MetricsLog& log, const std::string& path);

/// summary.json: pdr, rtt percentiles p50/p90/p99 (integer us), per-node
/// radio utilization fractions.
void write_summary_json(const MetricsLog& log, const std::string& path);

/// cdf.csv: t_us,fraction at the given resolution.
void write_cdf_csv(const MetricsLog& log, const std::string& path, Dur resolution);

/// Re-read puts.csv and nodes.csv into a log (report path); runtime is taken
/// from the maximum of tx_us + rx_us per node unless given.
MetricsLog read_run_dir(const std::string& dir);

}  // namespace bleip::csvio
