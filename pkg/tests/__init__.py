# flownet tests
