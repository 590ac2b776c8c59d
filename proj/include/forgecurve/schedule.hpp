#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "forgecurve/errors.hpp"

namespace forgecurve {

// Ordered replay intervals in human days, e.g. {1, 2, 4, 7, 15, 30}.
// Strictly increasing and positive.
class HumanSchedule {
public:
    explicit HumanSchedule(std::vector<double> days);

    static HumanSchedule ebbinghaus_default();  // {1, 2, 4, 7, 15, 30}

    const std::vector<double>& days() const { return days_; }
    std::size_t size() const { return days_.size(); }

private:
    std::vector<double> days_;
};

enum class ScheduleMode {
    ForgettingCurve,     // thresholds d * tau_day compared against tau
    FixedIntervalSteps,  // fires at every positive multiple of a step period
    Reversed,            // cumulative descending gaps, compared against tau
    EndOnly,             // fires once, when the task finishes
    StepCalibrated,      // thresholds d * steps_per_day compared against step
};

std::string schedule_mode_name(ScheduleMode mode);
ScheduleMode schedule_mode_from_name(const std::string& name);

class ReplaySchedule;

struct SchedulePoll {
    bool fired = false;
    std::size_t crossed = 0;  // thresholds consumed by this poll
    double threshold = 0.0;   // first threshold consumed when fired
};

// Replay thresholds plus a cursor over them. Polling is pure: it returns the
// decision and leaves advancing the cursor to advance(), so callers own the
// state transition explicitly.
class ReplaySchedule {
public:
    // thresholds = {d * tau_day}, in the given (increasing) order.
    static ReplaySchedule calibrate(const HumanSchedule& human, double tau_day);

    // Fires whenever step_in_task is a positive multiple of `period`.
    static ReplaySchedule fixed_interval(long period);

    // Day list reversed to descending and accumulated, so gaps shrink over
    // time: {1,2,4,7,15,30} -> thresholds {30,45,52,56,58,59} * tau_day.
    // A literal descending threshold list would fire all-but-first at once.
    static ReplaySchedule reversed(const HumanSchedule& human, double tau_day);

    // Fires exactly once, when task_finished is reported.
    static ReplaySchedule end_only();

    // thresholds = {d * steps_per_day}, compared against step_in_task.
    static ReplaySchedule step_calibrated(const HumanSchedule& human,
                                          long steps_per_day);

    // Decide whether replay fires at this instant. Never fires for the first
    // task (task_index 1, nothing to replay) or on an exhausted schedule.
    // When several thresholds are crossed at once, fires a single event and
    // reports how many thresholds it consumed.
    SchedulePoll poll(double clock_tau, long step_in_task, int task_index,
                      bool task_finished) const;

    // Applies the outcome of a poll to produce the successor state.
    ReplaySchedule advanced(const SchedulePoll& poll) const;

    ScheduleMode mode() const { return mode_; }
    const std::vector<double>& thresholds() const { return thresholds_; }
    std::size_t next_index() const { return next_index_; }
    bool exhausted() const;
    long period() const { return period_; }

private:
    ReplaySchedule() = default;

    ScheduleMode mode_ = ScheduleMode::ForgettingCurve;
    std::vector<double> thresholds_;
    std::size_t next_index_ = 0;
    long period_ = 0;         // FixedIntervalSteps only
    bool end_fired_ = false;  // EndOnly only
};

// Mode-dispatching factory. `parameter` is tau_day for ForgettingCurve and
// Reversed, the step period for FixedIntervalSteps, steps_per_day for
// StepCalibrated, and ignored for EndOnly.
ReplaySchedule make_variant(ScheduleMode mode, const HumanSchedule& human,
                            double parameter);

}  // namespace forgecurve
