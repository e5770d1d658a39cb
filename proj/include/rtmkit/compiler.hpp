#pragma once

#include "rtmkit/calculus.hpp"
#include "rtmkit/rtm.hpp"

namespace rtmkit {

// Reserved channel roles: tape read/write/move, queue input/output/auxiliary
// and the universal-delivery channel. Machines being compiled must not use
// them for their own communication.
namespace channel_role {
inline const std::string kRead = "r";
inline const std::string kWrite = "w";
inline const std::string kMove = "m";
inline const std::string kQueueIn = "i";
inline const std::string kQueueOut = "o";
inline const std::string kQueueAux = "l";
inline const std::string kUniversal = "u";
}  // namespace channel_role

// Reserved tape-data markers, outside the machine's tape alphabet: '@' ends
// the right part of the rotating queue, '$' marks one full rotation.
inline const std::string kEndMarker = "@";
inline const std::string kRotationMarker = "$";

// Definitional oracle: one name per configuration, the sum of its outgoing
// steps plus an optional skip summand. Isomorphic to semantics(m) by
// construction.
LtsGenerator spec_infinite_of_rtm(const Rtm& m);

// The six-equation finite queue specification, summations expanded over the
// alphabet in sorted order.
RecSpec queue_finite_spec(const std::vector<std::string>& alphabet);

// Lazy queues and tapes as transition systems: queue states are contents
// (newest element first), tape states are tape instances.
LtsGenerator queue_infinite_gen(const std::vector<std::string>& alphabet);
LtsGenerator tape_infinite_gen(const std::vector<std::string>& alphabet);

// Queue generator started from given contents.
LtsGenerator queue_infinite_gen_from(const std::vector<std::string>& alphabet,
                                     const std::vector<std::string>& contents);

// Tape controller equations: the head cell is held by the controller, the
// rest of the tape circulates through a queue.
RecSpec tape_controller_spec(const std::vector<std::string>& alphabet);

// One equation per (state, tape symbol) pair driving read/write/move
// handshakes with the tape process.
RecSpec finite_control_spec(const Rtm& m);

// The tape with the finite queue holding just the end marker: the controller
// composed over {i,o} with the nested two-cell queue assembly.
PExpr tape_assembly(const std::vector<std::string>& alphabet);

// Emits the union of the finite control, tape controller and queue equations
// with root <C_init_blank || tape>_{r,w,m}. Throws on reserved-channel or
// reserved-marker collisions.
std::pair<RecSpec, PExpr> compile_rtm(const Rtm& m);

// Queue alphabet used by the tape constructions: tape symbols plus both
// markers.
std::vector<std::string> queue_alphabet_for(const std::vector<std::string>& tape_alphabet);

// Name helpers shared with the tests.
std::string control_name(const std::string& state, const std::string& symbol);
std::string head_name(const std::string& symbol);

}  // namespace rtmkit
