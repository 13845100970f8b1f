#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vforge/errors.hpp"

namespace vforge {

enum class ControlCommand { Forward, Backward, Left, Right, Stop };

// One H-bridge motor channel.  in1/in2 select polarity (both set is
// electrical shoot-through and rejected); duty is pwm_level/255 by
// construction.
struct MotorState {
  bool in1 = false;
  bool in2 = false;
  int pwm_level = 0;

  double duty() const { return pwm_level / 255.0; }

  // Validating factory; raises ValidationError on shoot-through or an
  // out-of-range level.
  static MotorState make(bool in1, bool in2, int pwm_level);
};

enum class TraceChannel { A_IN1, A_IN2, A_PWM, B_IN1, B_IN2, B_PWM };

struct TraceEvent {
  std::int64_t time_us = 0;
  TraceChannel channel = TraceChannel::A_PWM;
  int value = 0;  // 0 or 1
};

std::string_view channel_name(TraceChannel channel);
std::optional<TraceChannel> channel_from_name(std::string_view name);
std::string_view command_name(ControlCommand cmd);

// Case-insensitive parse of one serial frame (trailing newline/whitespace
// ignored).  Empty frames yield nullopt; unknown tokens raise
// CommandParseError naming the token.
std::optional<ControlCommand> parse_command(std::string_view frame);

// Fixed command table for the two drive motors (A, B).
std::pair<MotorState, MotorState> command_to_motor_states(ControlCommand cmd);

// Synthesizes logic-analyzer-style traces for both motors: PWM edges with
// period 1/pwm_freq_hz, high time = duty * period, rising edge at each
// period start, all times floored to integer microseconds; IN1/IN2 emit one
// event at t = 0.  Constant channels (duty 0 or 1) emit a single event.
std::vector<TraceEvent> generate_pwm_trace(
    const std::pair<MotorState, MotorState>& states, double duration_ms,
    double pwm_freq_hz = 490.0);

// Duty ratio of one channel over an integer number of complete PWM periods.
// The first complete period (and any partial data before the first rising
// edge) is excluded as the startup transient.  Constant channels measure
// 0.0 / 1.0 directly; otherwise at least two complete periods must remain
// or TraceError is raised.
double measure_duty(const std::vector<TraceEvent>& trace,
                    TraceChannel channel);

// Differential drive mixing: duty_A = clamp(linear - angular, -1, 1),
// duty_B = clamp(linear + angular, -1, 1).  Inputs outside [-1, 1] raise
// DomainError.  Signs select polarity; see motor_state_from_signed_duty.
std::pair<double, double> differential_steer(double linear, double angular);

// Signed duty in [-1, 1] -> H-bridge state: sign picks in1/in2, magnitude
// picks pwm_level = round(|duty| * 255).
MotorState motor_state_from_signed_duty(double signed_duty);

// CSV with header "time_us,channel,value", rows time-ordered, LF endings.
std::string export_trace_csv(const std::vector<TraceEvent>& trace);
std::vector<TraceEvent> parse_trace_csv(std::string_view text);

}  // namespace vforge
