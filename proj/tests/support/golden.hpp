#pragma once

#include <string>
#include <vector>

namespace golden {

struct Run {
    std::vector<std::string> args;
    int exit_code;
    /// Schema file name under schemas/.
    std::string schema;
};

/// Repeated-run suite: every subcommand, its main variants and the error paths.
inline const std::vector<Run>& suite() {
    static const std::vector<Run> runs = {
        {{"deficiency", "--op", "momentum", "--interval", "0,1"}, 0, "deficiency.json"},
        {{"deficiency", "--op", "momentum", "--interval", "0,inf"}, 0, "deficiency.json"},
        {{"deficiency", "--op", "momentum", "--interval", "-inf,inf"}, 0, "deficiency.json"},
        {{"deficiency", "--op", "hamiltonian", "--interval", "0,inf"}, 0, "deficiency.json"},
        {{"deficiency", "--op", "time"}, 0, "deficiency.json"},
        {{"extend", "--op", "momentum", "--gamma", "1.2"}, 0, "extend.json"},
        {{"extend", "--op", "hamiltonian", "--gamma", "0"}, 0, "extend.json"},
        {{"extend", "--op", "hamiltonian", "--gamma", "3.141592653589793"}, 0, "extend.json"},
        {{"spectrum", "--op", "momentum", "--theta", "1.0471975511965976", "--n-min", "-5", "--n-max", "5"},
         0, "spectrum.json"},
        {{"spectrum", "--op", "well", "--length", "2", "--n-min", "1", "--n-max", "4"}, 0, "spectrum.json"},
        {{"spectrum", "--op", "hamiltonian", "--alpha", "-1.5"}, 0, "spectrum.json"},
        {{"boundstate", "--alpha", "-1"}, 0, "boundstate.json"},
        {{"boundstate", "--alpha", "-2", "--shooting"}, 0, "boundstate.json"},
        {{"boundstate", "--alpha", "1"}, 0, "boundstate.json"},
        {{"scatter", "--alpha", "-1", "--k", "2"}, 0, "scatter.json"},
        {{"scatter", "--alpha", "inf", "--k", "0.5"}, 0, "scatter.json"},
        {{"anomaly", "--alpha", "-1"}, 0, "anomaly.json"},
        {{"anomaly", "--alpha", "-2", "--t", "7.3"}, 0, "anomaly.json"},
        {{"paradox", "--id", "1", "--n", "1024"}, 0, "paradox.json"},
        {{"paradox", "--id", "2", "--n", "8", "--seed", "3"}, 0, "paradox.json"},
        {{"paradox", "--id", "3", "--n", "5"}, 0, "paradox.json"},
        {{"paradox", "--id", "4", "--m", "6", "--l", "2"}, 0, "paradox.json"},
        {{"classical", "--s", "-2"}, 0, "classical.json"},
        {{"classical", "--s", "-1", "--g", "0.5"}, 0, "classical.json"},
        {{"geometry", "--metric", "polar"}, 0, "geometry.json"},
        {{"geometry", "--metric", "spherical", "--probe", "bump:1,3"}, 0, "geometry.json"},
        {{"sweep", "anomaly", "--sweep", "alpha=-4:-0.25:16"}, 0, "sweep.json"},
        {{"sweep", "scatter", "--sweep", "k=0.1:10:100", "--alpha", "-1"}, 0, "sweep.json"},
        {{"sweep", "boundstate", "--sweep", "alpha=-1:1:0"}, 0, "sweep.json"},
        {{"anomaly", "--alpha", "1"}, 1, "error.json"},
        {{"scatter", "--alpha", "0", "--k", "0"}, 1, "error.json"},
        {{"classical", "--s", "1/2", "--q0", "2"}, 1, "error.json"},
        {{"sweep", "scatter", "--sweep", "k=1:2:2000", "--sweep", "alpha=-1:1:1000"}, 1, "error.json"},
    };
    return runs;
}

}  // namespace golden
