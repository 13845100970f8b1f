#include "vforge/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vforge/textio.hpp"

namespace vforge {

MotorState MotorState::make(bool in1, bool in2, int pwm_level) {
  if (in1 && in2) {
    throw ValidationError("in1 and in2 both high would shoot through");
  }
  if (pwm_level < 0 || pwm_level > 255) {
    throw ValidationError("pwm_level must be in [0, 255]");
  }
  MotorState state;
  state.in1 = in1;
  state.in2 = in2;
  state.pwm_level = pwm_level;
  return state;
}

namespace {

constexpr std::array<std::pair<TraceChannel, std::string_view>, 6> kChannels =
    {{{TraceChannel::A_IN1, "A_IN1"},
      {TraceChannel::A_IN2, "A_IN2"},
      {TraceChannel::A_PWM, "A_PWM"},
      {TraceChannel::B_IN1, "B_IN1"},
      {TraceChannel::B_IN2, "B_IN2"},
      {TraceChannel::B_PWM, "B_PWM"}}};

}  // namespace

std::string_view channel_name(TraceChannel channel) {
  return kChannels[static_cast<int>(channel)].second;
}

std::optional<TraceChannel> channel_from_name(std::string_view name) {
  for (const auto& [ch, nm] : kChannels) {
    if (nm == name) return ch;
  }
  return std::nullopt;
}

std::string_view command_name(ControlCommand cmd) {
  switch (cmd) {
    case ControlCommand::Forward: return "forward";
    case ControlCommand::Backward: return "backward";
    case ControlCommand::Left: return "left";
    case ControlCommand::Right: return "right";
    case ControlCommand::Stop: return "stop";
  }
  return "unknown";
}

std::optional<ControlCommand> parse_command(std::string_view frame) {
  std::string token = to_lower(trim(frame));
  if (token.empty()) return std::nullopt;
  if (token == "forward") return ControlCommand::Forward;
  if (token == "backward") return ControlCommand::Backward;
  if (token == "left") return ControlCommand::Left;
  if (token == "right") return ControlCommand::Right;
  if (token == "stop") return ControlCommand::Stop;
  throw CommandParseError("unknown command token `" + token + "`");
}

std::pair<MotorState, MotorState> command_to_motor_states(ControlCommand cmd) {
  switch (cmd) {
    case ControlCommand::Forward:
      return {MotorState::make(true, false, 100),
              MotorState::make(true, false, 100)};
    case ControlCommand::Backward:
      return {MotorState::make(false, true, 80),
              MotorState::make(false, true, 80)};
    case ControlCommand::Left:
      // Turning toward the low-duty side: motor A inside the turn.
      return {MotorState::make(true, false, 40),
              MotorState::make(true, false, 150)};
    case ControlCommand::Right:
      return {MotorState::make(true, false, 150),
              MotorState::make(true, false, 40)};
    case ControlCommand::Stop:
      return {MotorState::make(false, false, 0),
              MotorState::make(false, false, 0)};
  }
  throw DomainError("unknown control command");
}

namespace {

void append_channel_events(std::vector<TraceEvent>& events,
                           const MotorState& state, TraceChannel in1,
                           TraceChannel in2, TraceChannel pwm,
                           double duration_us, double period_us) {
  events.push_back({0, in1, state.in1 ? 1 : 0});
  events.push_back({0, in2, state.in2 ? 1 : 0});
  double duty = state.duty();
  if (duty <= 0.0) {
    events.push_back({0, pwm, 0});
    return;
  }
  if (duty >= 1.0) {
    events.push_back({0, pwm, 1});
    return;
  }
  for (int k = 0;; ++k) {
    double rise = k * period_us;
    if (rise >= duration_us) break;
    events.push_back({static_cast<std::int64_t>(std::floor(rise)), pwm, 1});
    double fall = rise + duty * period_us;
    if (fall >= duration_us) break;
    events.push_back({static_cast<std::int64_t>(std::floor(fall)), pwm, 0});
  }
}

}  // namespace

std::vector<TraceEvent> generate_pwm_trace(
    const std::pair<MotorState, MotorState>& states, double duration_ms,
    double pwm_freq_hz) {
  if (duration_ms <= 0.0) throw DomainError("duration must be > 0");
  if (pwm_freq_hz <= 0.0) throw DomainError("pwm frequency must be > 0");
  const double duration_us = duration_ms * 1000.0;
  const double period_us = 1e6 / pwm_freq_hz;

  std::vector<TraceEvent> events;
  append_channel_events(events, states.first, TraceChannel::A_IN1,
                        TraceChannel::A_IN2, TraceChannel::A_PWM, duration_us,
                        period_us);
  append_channel_events(events, states.second, TraceChannel::B_IN1,
                        TraceChannel::B_IN2, TraceChannel::B_PWM, duration_us,
                        period_us);
  std::stable_sort(events.begin(), events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) {
                     if (a.time_us != b.time_us) return a.time_us < b.time_us;
                     return static_cast<int>(a.channel) <
                            static_cast<int>(b.channel);
                   });
  return events;
}

double measure_duty(const std::vector<TraceEvent>& trace,
                    TraceChannel channel) {
  std::vector<TraceEvent> events;
  for (const auto& e : trace) {
    if (e.channel == channel) events.push_back(e);
  }
  if (events.empty()) {
    throw TraceError("no events for channel " +
                     std::string(channel_name(channel)));
  }
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].time_us <= events[i - 1].time_us ||
        events[i].value == events[i - 1].value) {
      throw TraceError("channel " + std::string(channel_name(channel)) +
                       " events must be time-ordered and alternating");
    }
  }
  // Constant channels carry their level in a single event.
  if (events.size() == 1) return events[0].value == 0 ? 0.0 : 1.0;

  std::vector<std::int64_t> rises;
  for (const auto& e : events) {
    if (e.value == 1) rises.push_back(e.time_us);
  }
  if (rises.size() < 3) {
    throw TraceError("channel " + std::string(channel_name(channel)) +
                     " has fewer than 2 complete periods after the "
                     "startup transient");
  }
  // Measure from the second rising edge (the first complete period models
  // the startup transient) to the last rising edge.
  const std::int64_t t0 = rises[1];
  const std::int64_t t1 = rises.back();
  std::int64_t high_us = 0;
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    if (events[i].value != 1) continue;
    std::int64_t rise = events[i].time_us;
    std::int64_t fall = events[i + 1].time_us;
    if (rise >= t0 && rise < t1) high_us += fall - rise;
  }
  return static_cast<double>(high_us) / static_cast<double>(t1 - t0);
}

std::pair<double, double> differential_steer(double linear, double angular) {
  if (linear < -1.0 || linear > 1.0) {
    throw DomainError("linear input must be in [-1, 1]");
  }
  if (angular < -1.0 || angular > 1.0) {
    throw DomainError("angular input must be in [-1, 1]");
  }
  double duty_a = std::clamp(linear - angular, -1.0, 1.0);
  double duty_b = std::clamp(linear + angular, -1.0, 1.0);
  return {duty_a, duty_b};
}

MotorState motor_state_from_signed_duty(double signed_duty) {
  if (signed_duty < -1.0 || signed_duty > 1.0) {
    throw DomainError("signed duty must be in [-1, 1]");
  }
  int level = static_cast<int>(std::lround(std::abs(signed_duty) * 255.0));
  if (signed_duty > 0.0) return MotorState::make(true, false, level);
  if (signed_duty < 0.0) return MotorState::make(false, true, level);
  return MotorState::make(false, false, 0);
}

std::string export_trace_csv(const std::vector<TraceEvent>& trace) {
  std::string out = "time_us,channel,value\n";
  for (const auto& e : trace) {
    out += std::to_string(e.time_us);
    out += ",";
    out += channel_name(e.channel);
    out += ",";
    out += std::to_string(e.value);
    out += "\n";
  }
  return out;
}

std::vector<TraceEvent> parse_trace_csv(std::string_view text) {
  std::vector<TraceEvent> trace;
  std::size_t pos = 0;
  int line_no = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (!saw_header) {
      if (stripped != "time_us,channel,value") {
        throw TraceError("line 1: expected trace CSV header");
      }
      saw_header = true;
      continue;
    }
    std::size_t c1 = stripped.find(',');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos
                                             : stripped.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw TraceError("line " + std::to_string(line_no) +
                       ": expected time_us,channel,value");
    }
    TraceEvent event;
    try {
      event.time_us = std::stoll(trim(stripped.substr(0, c1)));
      event.value = parse_int(stripped.substr(c2 + 1));
    } catch (const DomainError& e) {
      throw TraceError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception&) {
      throw TraceError("line " + std::to_string(line_no) +
                       ": could not parse time_us");
    }
    auto channel =
        channel_from_name(trim(stripped.substr(c1 + 1, c2 - c1 - 1)));
    if (!channel) {
      throw TraceError("line " + std::to_string(line_no) +
                       ": unknown channel name");
    }
    event.channel = *channel;
    if (event.value != 0 && event.value != 1) {
      throw TraceError("line " + std::to_string(line_no) +
                       ": value must be 0 or 1");
    }
    trace.push_back(event);
  }
  if (!saw_header) throw TraceError("trace CSV is empty");
  return trace;
}

}  // namespace vforge
