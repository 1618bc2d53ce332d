from chkplab.cli import entrypoint

entrypoint()
