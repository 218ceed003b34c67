#ifndef SCLDPC_CLI_HPP
#define SCLDPC_CLI_HPP

namespace scldpc {

// command-line front end; returns the process exit status
int cli_main(int argc, char** argv);

}  // namespace scldpc

#endif
