"""Orthomodular-lattice algebra and an orthomodular-valued set-theory model checker."""
