# Este arquivo permite que o diretório infsup/utils seja tratado como um pacote Python
