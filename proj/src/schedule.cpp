#include "forgecurve/schedule.hpp"

#include <algorithm>
#include <cmath>

namespace forgecurve {

HumanSchedule::HumanSchedule(std::vector<double> days) : days_(std::move(days)) {
    if (days_.empty()) {
        throw CalibrationError("human schedule: day list is empty");
    }
    for (std::size_t i = 0; i < days_.size(); ++i) {
        if (!std::isfinite(days_[i]) || days_[i] <= 0.0) {
            throw CalibrationError("human schedule: day " + std::to_string(i) +
                                   " must be a positive finite number");
        }
        if (i > 0 && days_[i] <= days_[i - 1]) {
            throw CalibrationError("human schedule: days must be strictly increasing");
        }
    }
}

HumanSchedule HumanSchedule::ebbinghaus_default() {
    return HumanSchedule({1.0, 2.0, 4.0, 7.0, 15.0, 30.0});
}

std::string schedule_mode_name(ScheduleMode mode) {
    switch (mode) {
        case ScheduleMode::ForgettingCurve: return "forgetting_curve";
        case ScheduleMode::FixedIntervalSteps: return "fixed_interval";
        case ScheduleMode::Reversed: return "reversed";
        case ScheduleMode::EndOnly: return "end_only";
        case ScheduleMode::StepCalibrated: return "step_calibrated";
    }
    return "unknown";
}

ScheduleMode schedule_mode_from_name(const std::string& name) {
    if (name == "forgetting_curve") return ScheduleMode::ForgettingCurve;
    if (name == "fixed_interval") return ScheduleMode::FixedIntervalSteps;
    if (name == "reversed") return ScheduleMode::Reversed;
    if (name == "end_only") return ScheduleMode::EndOnly;
    if (name == "step_calibrated") return ScheduleMode::StepCalibrated;
    throw ConfigError("unknown schedule mode: " + name);
}

ReplaySchedule ReplaySchedule::calibrate(const HumanSchedule& human, double tau_day) {
    if (!std::isfinite(tau_day) || tau_day <= 0.0) {
        throw CalibrationError("calibrate: tau_day must be positive and finite, got " +
                               std::to_string(tau_day));
    }
    ReplaySchedule s;
    s.mode_ = ScheduleMode::ForgettingCurve;
    s.thresholds_.reserve(human.size());
    for (double d : human.days()) {
        s.thresholds_.push_back(d * tau_day);
    }
    return s;
}

ReplaySchedule ReplaySchedule::fixed_interval(long period) {
    if (period < 1) {
        throw CalibrationError("fixed_interval: period must be a positive integer");
    }
    ReplaySchedule s;
    s.mode_ = ScheduleMode::FixedIntervalSteps;
    s.period_ = period;
    return s;
}

ReplaySchedule ReplaySchedule::reversed(const HumanSchedule& human, double tau_day) {
    if (!std::isfinite(tau_day) || tau_day <= 0.0) {
        throw CalibrationError("reversed: tau_day must be positive and finite, got " +
                               std::to_string(tau_day));
    }
    std::vector<double> gaps(human.days().rbegin(), human.days().rend());
    ReplaySchedule s;
    s.mode_ = ScheduleMode::Reversed;
    s.thresholds_.reserve(gaps.size());
    double acc = 0.0;
    for (double g : gaps) {
        acc += g;
        s.thresholds_.push_back(acc * tau_day);
    }
    return s;
}

ReplaySchedule ReplaySchedule::end_only() {
    ReplaySchedule s;
    s.mode_ = ScheduleMode::EndOnly;
    return s;
}

ReplaySchedule ReplaySchedule::step_calibrated(const HumanSchedule& human,
                                               long steps_per_day) {
    if (steps_per_day < 1) {
        throw CalibrationError("step_calibrated: steps_per_day must be a positive integer");
    }
    ReplaySchedule s;
    s.mode_ = ScheduleMode::StepCalibrated;
    s.thresholds_.reserve(human.size());
    for (double d : human.days()) {
        s.thresholds_.push_back(d * static_cast<double>(steps_per_day));
    }
    return s;
}

SchedulePoll ReplaySchedule::poll(double clock_tau, long step_in_task,
                                  int task_index, bool task_finished) const {
    if (!std::isfinite(clock_tau)) {
        throw NumericError("poll: clock_tau is not finite");
    }
    SchedulePoll out;
    if (task_index <= 1) {
        return out;  // nothing learned yet, nothing to replay
    }
    switch (mode_) {
        case ScheduleMode::ForgettingCurve:
        case ScheduleMode::Reversed: {
            if (next_index_ < thresholds_.size() &&
                clock_tau >= thresholds_[next_index_]) {
                out.fired = true;
                out.threshold = thresholds_[next_index_];
                std::size_t i = next_index_;
                while (i < thresholds_.size() && clock_tau >= thresholds_[i]) {
                    ++i;
                }
                out.crossed = i - next_index_;
            }
            break;
        }
        case ScheduleMode::StepCalibrated: {
            const double s = static_cast<double>(step_in_task);
            if (next_index_ < thresholds_.size() && s >= thresholds_[next_index_]) {
                out.fired = true;
                out.threshold = thresholds_[next_index_];
                std::size_t i = next_index_;
                while (i < thresholds_.size() && s >= thresholds_[i]) {
                    ++i;
                }
                out.crossed = i - next_index_;
            }
            break;
        }
        case ScheduleMode::FixedIntervalSteps: {
            if (step_in_task > 0 && step_in_task % period_ == 0) {
                out.fired = true;
                out.threshold = static_cast<double>(step_in_task);
                out.crossed = 1;
            }
            break;
        }
        case ScheduleMode::EndOnly: {
            if (task_finished && !end_fired_) {
                out.fired = true;
                out.crossed = 1;
            }
            break;
        }
    }
    return out;
}

ReplaySchedule ReplaySchedule::advanced(const SchedulePoll& poll) const {
    ReplaySchedule next = *this;
    if (!poll.fired) {
        return next;
    }
    switch (mode_) {
        case ScheduleMode::ForgettingCurve:
        case ScheduleMode::Reversed:
        case ScheduleMode::StepCalibrated:
            next.next_index_ = std::min(next_index_ + poll.crossed, thresholds_.size());
            break;
        case ScheduleMode::FixedIntervalSteps:
            break;  // no cursor, fires on every multiple
        case ScheduleMode::EndOnly:
            next.end_fired_ = true;
            break;
    }
    return next;
}

bool ReplaySchedule::exhausted() const {
    switch (mode_) {
        case ScheduleMode::ForgettingCurve:
        case ScheduleMode::Reversed:
        case ScheduleMode::StepCalibrated:
            return next_index_ >= thresholds_.size();
        case ScheduleMode::FixedIntervalSteps:
            return false;
        case ScheduleMode::EndOnly:
            return end_fired_;
    }
    return true;
}

ReplaySchedule make_variant(ScheduleMode mode, const HumanSchedule& human,
                            double parameter) {
    switch (mode) {
        case ScheduleMode::ForgettingCurve:
            return ReplaySchedule::calibrate(human, parameter);
        case ScheduleMode::FixedIntervalSteps: {
            if (!std::isfinite(parameter) || parameter != std::floor(parameter)) {
                throw CalibrationError("fixed_interval: period must be an integer");
            }
            return ReplaySchedule::fixed_interval(static_cast<long>(parameter));
        }
        case ScheduleMode::Reversed:
            return ReplaySchedule::reversed(human, parameter);
        case ScheduleMode::EndOnly:
            return ReplaySchedule::end_only();
        case ScheduleMode::StepCalibrated: {
            if (!std::isfinite(parameter) || parameter != std::floor(parameter)) {
                throw CalibrationError("step_calibrated: steps_per_day must be an integer");
            }
            return ReplaySchedule::step_calibrated(human, static_cast<long>(parameter));
        }
    }
    throw CalibrationError("make_variant: unknown schedule mode");
}

}  // namespace forgecurve
