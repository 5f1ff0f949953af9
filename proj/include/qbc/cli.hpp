#pragma once

namespace qbc {

// Entry point behind the qbcsim binary; exposed so tests can drive the
// command surface in-process. Returns 0 on success, 1 on an invariant
// violation during a run, 2 on bad configuration.
int cli_main(int argc, const char* const* argv);

}  // namespace qbc
