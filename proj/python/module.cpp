#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bleip/adv_codec.hpp"
#include "bleip/dedup.hpp"
#include "bleip/engine.hpp"
#include "bleip/medium.hpp"
#include "bleip/metrics.hpp"
#include "bleip/scenario.hpp"

namespace py = pybind11;
using namespace bleip;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "IP over BLE advertising simulator core";

    py::register_exception<InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);

    // ---- codec ----
    py::class_<codec::AdBlock>(m, "AdBlock")
        .def_readonly("bytes", &codec::AdBlock::bytes)
        .def_readonly("seq", &codec::AdBlock::seq)
        .def_readonly("ip_len", &codec::AdBlock::ip_len)
        .def("segments", &codec::AdBlock::segments);
    py::class_<codec::Decoded>(m, "Decoded")
        .def_readonly("seq", &codec::Decoded::seq)
        .def_readonly("ip_payload", &codec::Decoded::ip_payload);
    py::class_<codec::AuxPlan>(m, "AuxPlan")
        .def_readonly("frame_sizes", &codec::AuxPlan::frame_sizes);

    m.def("encode", [](const std::vector<std::uint8_t>& payload, std::uint8_t seq,
                       std::uint16_t uuid) { return codec::encode(payload, seq, uuid); },
          py::arg("payload"), py::arg("seq"), py::arg("uuid") = codec::kDefaultServiceUuid);
    m.def("decode", [](const std::vector<std::uint8_t>& block, std::uint16_t uuid) {
              return codec::decode(block, uuid);
          },
          py::arg("block"), py::arg("uuid") = codec::kDefaultServiceUuid);
    m.def("plan_aux", &codec::plan_aux, py::arg("block_len"),
          py::arg("aux_capacity") = codec::kDefaultAuxCapacity,
          py::arg("max_chain") = codec::kDefaultMaxChain);

    m.attr("SEGMENT_DATA_CAPACITY") = codec::kSegmentDataCapacity;
    m.attr("MTU") = codec::kMtu;

    // ---- dedup ----
    py::enum_<DedupVerdict>(m, "DedupVerdict")
        .value("Fresh", DedupVerdict::Fresh)
        .value("Duplicate", DedupVerdict::Duplicate);
    py::class_<DedupTable>(m, "DedupTable")
        .def(py::init<std::size_t>(), py::arg("capacity") = 32)
        .def("check_and_update",
             [](DedupTable& t, const std::string& src, std::uint8_t seq) {
                 BleAddress a{};
                 for (std::size_t i = 0; i < a.octets.size() && i < src.size(); ++i) {
                     a.octets[i] = static_cast<std::uint8_t>(src[i]);
                 }
                 return t.check_and_update(a, seq);
             },
             py::arg("src"), py::arg("seq"));

    // ---- medium ----
    m.def("air_time_us", &air_time, py::arg("pdu_len"));

    // ---- scenario & engine ----
    py::enum_<Mode>(m, "Mode").value("Adv", Mode::Adv).value("Conn", Mode::Conn);
    py::enum_<Topology>(m, "Topology")
        .value("Star", Topology::Star)
        .value("Tree", Topology::Tree)
        .value("Line", Topology::Line);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("mode", &ScenarioConfig::mode)
        .def_readwrite("topology", &ScenarioConfig::topology)
        .def_readwrite("producers", &ScenarioConfig::producers)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("duration_us", &ScenarioConfig::duration_us)
        .def_readwrite("adv_interval_us", &ScenarioConfig::adv_interval_us)
        .def_readwrite("retransmissions", &ScenarioConfig::retransmissions)
        .def_readwrite("adv_jitter_max_us", &ScenarioConfig::adv_jitter_max_us)
        .def_readwrite("conn_interval_lo_us", &ScenarioConfig::conn_interval_lo_us)
        .def_readwrite("conn_interval_hi_us", &ScenarioConfig::conn_interval_hi_us)
        .def_readwrite("producer_interval_us", &ScenarioConfig::producer_interval_us)
        .def_readwrite("put_payload", &ScenarioConfig::put_payload)
        .def_readwrite("noise_advertisers", &ScenarioConfig::noise_advertisers)
        .def("validate", &ScenarioConfig::validate);

    m.def("load_scenario", &load_scenario, py::arg("toml_text"));
    m.def("load_scenario_file", &load_scenario_file, py::arg("path"));

    py::class_<PutRecord>(m, "PutRecord")
        .def_readonly("id", &PutRecord::id)
        .def_readonly("producer", &PutRecord::producer)
        .def_readonly("send_us", &PutRecord::send_us)
        .def_readonly("ack_us", &PutRecord::ack_us)
        .def_readonly("hops", &PutRecord::hops);
    py::class_<NodeStats>(m, "NodeStats")
        .def_readonly("tx_us", &NodeStats::tx_us)
        .def_readonly("rx_us", &NodeStats::rx_us)
        .def_readonly("frames_tx", &NodeStats::frames_tx)
        .def_readonly("frames_rx", &NodeStats::frames_rx)
        .def_readonly("dropped_adv_events", &NodeStats::dropped_adv_events)
        .def_readonly("queue_drops", &NodeStats::queue_drops)
        .def_readonly("duplicates", &NodeStats::duplicates);
    py::class_<MetricsLog>(m, "MetricsLog")
        .def_readonly("runtime_us", &MetricsLog::runtime_us)
        .def_readonly("puts", &MetricsLog::puts)
        .def_readonly("nodes", &MetricsLog::nodes)
        .def_readonly("frames_transmitted", &MetricsLog::frames_transmitted)
        .def_readonly("frames_collided", &MetricsLog::frames_collided)
        .def_readonly("ip_duplicates", &MetricsLog::ip_duplicates)
        .def("pdr", [](const MetricsLog& l) { return metrics::pdr(l); })
        .def("rtt_percentile",
             [](const MetricsLog& l, double p) { return metrics::rtt_percentile(l, p); },
             py::arg("p"))
        .def("rtt_cdf",
             [](const MetricsLog& l, Dur res) { return metrics::rtt_cdf(l, res); },
             py::arg("resolution_us") = 1000);

    m.def("run_scenario", &run_scenario, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep_scenario", &sweep_scenario, py::arg("config"), py::arg("param"),
          py::arg("values"), py::call_guard<py::gil_scoped_release>());
    m.def("lifetime_hours", &metrics::lifetime_hours, py::arg("duty"),
          py::arg("radio_current_mA"), py::arg("battery_mAh"));
}
