#pragma once

#include "ocular/protocol/packet.hpp"

#include <deque>
#include <span>

namespace ocular::protocol {

/// Byte transport to a servo bus. Time is the transport's own clock in seconds,
/// so simulated and real transports share one contract.
class BusTransport {
 public:
  virtual ~BusTransport() = default;
  virtual void send(std::span<const std::uint8_t> bytes) = 0;
  /// Everything that arrives no later than `deadline`; empty means timeout.
  virtual Bytes receive(double deadline) = 0;
  virtual double now() const = 0;
};

/// Echoes sent bytes back to the receiver.
class LoopbackTransport : public BusTransport {
 public:
  void send(std::span<const std::uint8_t> bytes) override { pending_.insert(pending_.end(), bytes.begin(), bytes.end()); }
  Bytes receive(double) override {
    Bytes out(pending_.begin(), pending_.end());
    pending_.clear();
    return out;
  }
  double now() const override { return 0.0; }

 private:
  std::deque<std::uint8_t> pending_;
};

}  // namespace ocular::protocol
